use super::{build_few_shot_prompt, build_zero_shot_prompt};

pub const NEWS_TITLE: &str = "Europe's first bitcoin ETF set to launch after 12-month delay";

/// The last three titles the user read during office hours.
pub const PAST_TITLES: [&str; 3] = [
    "Thailand’s Pita loses parliamentary vote for prime minister",
    "Bitcoin Tumbles Toward $30K, KAVA Crashes 12% Daily (Market Watch)",
    "Barclays Said to Ready Sale of German Consumer Finance Business",
];

pub const NEWS_CATEGORIES: [&str; 5] = ["finance", "politics", "entertainment", "sports", "technology"];

const CLASSIFY_DESCRIPTION: &str = "Categorize the news title in the Question into one of the \
categories finance, politics, entertainment, sports or technology. Please answer the category only";

const RECOMMEND_DESCRIPTION: &str = "The user is in office hours. Based on the news the user read \
in the same context, decide whether the user would be interested in reading the news title in the \
Question. Please answer yes or no first, then explain";

/// Zero-shot classification prompt and few-shot recommendation prompt for
/// the bitcoin ETF notification.
pub fn news_fixture_prompts() -> (String, String) {
    let classification = build_zero_shot_prompt(CLASSIFY_DESCRIPTION, NEWS_TITLE);
    let mut examples = String::from("The last three news read by the user in the office hours are");
    for (numeral, title) in ["(i)", "(ii)", "(iii)"].iter().zip(PAST_TITLES) {
        examples.push_str(&format!("\n {numeral} \"{title}\""));
    }
    let recommendation = build_few_shot_prompt(RECOMMEND_DESCRIPTION, &examples, NEWS_TITLE);
    (classification, recommendation)
}

fn words(answer: &str) -> Vec<String> {
    answer
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// The first known category named in `answer`.
pub fn parse_category(answer: &str) -> Option<&'static str> {
    let words = words(answer);
    words.iter().find_map(|w| {
        NEWS_CATEGORIES
            .iter()
            .find(|c| w == *c || w.strip_suffix('s').is_some_and(|s| s == **c))
            .copied()
    })
}

/// `Some(true)` for a yes, `Some(false)` for a no, judged by whichever comes
/// first; `None` when the answer has neither.
pub fn parse_recommendation(answer: &str) -> Option<bool> {
    words(answer).iter().find_map(|w| match w.as_str() {
        "yes" => Some(true),
        "no" => Some(false),
        _ => None,
    })
}
