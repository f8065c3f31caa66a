use super::{GrammarConfig, GrammarError};

fn is_edge_punct(c: char) -> bool {
    matches!(c, ',' | ';' | ':' | '.' | '\u{2014}' | '-' | '(' | ')' | '"' | '!' | '?') || c.is_whitespace()
}

/// Matching key for a single printed word; empty for pure punctuation.
fn word_key(word: &str) -> String {
    word.trim_matches(is_edge_punct).replace('\u{2019}', "'").to_lowercase()
}

fn phrase_keys(phrase: &str) -> Vec<String> {
    phrase.split_whitespace().map(word_key).filter(|k| !k.is_empty()).collect()
}

/// Printed words paired with their keys, punctuation-only words dropped.
fn keyed_words(text: &str) -> Vec<(&str, String)> {
    text.split_whitespace()
        .map(|w| (w, word_key(w)))
        .filter(|(_, k)| !k.is_empty())
        .collect()
}

fn starts_with(words: &[(&str, String)], phrase: &[String]) -> bool {
    !phrase.is_empty() && words.len() >= phrase.len() && words.iter().zip(phrase).all(|((_, k), p)| k == p)
}

fn ends_with(words: &[(&str, String)], phrase: &[String]) -> bool {
    !phrase.is_empty()
        && words.len() >= phrase.len()
        && words[words.len() - phrase.len()..].iter().zip(phrase).all(|((_, k), p)| k == p)
}

fn join_trimmed(words: &[(&str, String)]) -> String {
    let joined = words.iter().map(|(w, _)| *w).collect::<Vec<_>>().join(" ");
    joined.trim_matches(is_edge_punct).to_string()
}

/// Reduces a connective phrase to the facet's noun head: "Its Parts, as" ->
/// "Parts", "Their Gods ;" -> "Gods".
///
/// Stop words and phrases are stripped from both ends, then surrounding
/// punctuation. Interior words are kept verbatim.
pub fn normalize_facet_label(connective: &str, config: &GrammarConfig) -> Result<String, GrammarError> {
    let stops: Vec<Vec<String>> = config.stop_words.iter().map(|s| phrase_keys(s)).collect();
    let mut words = keyed_words(connective);
    loop {
        let before = words.len();
        if let Some(stop) = stops.iter().filter(|s| starts_with(&words, s)).max_by_key(|s| s.len()) {
            words.drain(..stop.len());
        }
        if let Some(stop) = stops.iter().filter(|s| ends_with(&words, s)).max_by_key(|s| s.len()) {
            words.truncate(words.len() - stop.len());
        }
        if words.len() == before {
            break;
        }
    }
    let label = join_trimmed(&words);
    if label.is_empty() {
        Err(GrammarError::NormalizationEmpty {
            connective: connective.to_string(),
        })
    } else {
        Ok(label)
    }
}

/// The connective with surrounding punctuation removed, used when
/// normalization leaves nothing.
pub fn verbatim_label(connective: &str) -> String {
    let trimmed = connective.trim_matches(is_edge_punct);
    if trimmed.is_empty() {
        connective.trim().to_string()
    } else {
        trimmed.to_string()
    }
}

/// Splits "Fossils or Minerals, as" into ("Fossils", Some("Minerals, as")).
/// Only splits on a standalone "or" with words on both sides.
pub fn split_alternate(connective: &str) -> (String, Option<String>) {
    let words: Vec<&str> = connective.split_whitespace().collect();
    let has_content = |ws: &[&str]| ws.iter().any(|w| !word_key(w).is_empty());
    for (i, w) in words.iter().enumerate() {
        if word_key(w) == "or" && has_content(&words[..i]) && has_content(&words[i + 1..]) {
            return (words[..i].join(" "), Some(words[i + 1..].join(" ")));
        }
    }
    (connective.to_string(), None)
}

/// First keyword of a phrase after leading punctuation (", or the" -> "or").
pub fn leading_keyword(text: &str) -> Option<String> {
    keyed_words(text).into_iter().next().map(|(_, k)| k)
}

/// The longest nesting cue that begins or ends the connective.
pub fn match_cue(connective: &str, config: &GrammarConfig) -> Option<String> {
    let words = keyed_words(connective);
    config
        .nesting_cues
        .iter()
        .map(|c| phrase_keys(c))
        .filter(|cue| starts_with(&words, cue) || ends_with(&words, cue))
        .max_by_key(|cue| cue.len())
        .map(|cue| cue.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(s: &str) -> Result<String, GrammarError> {
        normalize_facet_label(s, &GrammarConfig::default())
    }

    #[test]
    fn printed_examples() {
        assert_eq!(norm("Its Parts, as").unwrap(), "Parts");
        assert_eq!(norm("Their Gods ;").unwrap(), "Gods");
        assert_eq!(norm("and their Phænomena, as").unwrap(), "Phænomena");
        assert_eq!(norm("with Operations relating to 'em, as").unwrap(), "Operations");
        assert_eq!(norm("with Operations relating to \u{2019}em, as").unwrap(), "Operations");
        assert_eq!(norm("Ministers thereof").unwrap(), "Ministers");
        assert_eq!(norm("publish'd in").unwrap(), "publish'd");
        assert_eq!(norm("Semi-metals, as").unwrap(), "Semi-metals");
        assert_eq!(norm("the History of EARTH").unwrap(), "History of EARTH");
    }

    #[test]
    fn stop_words_only() {
        assert_eq!(
            norm("as").unwrap_err(),
            GrammarError::NormalizationEmpty { connective: "as".into() }
        );
        assert!(norm("whence").is_err());
        assert!(norm(", ;").is_err());
        assert_eq!(verbatim_label("as"), "as");
        assert_eq!(verbatim_label(", as"), "as");
    }

    #[test]
    fn alternate_labels() {
        let (head, alt) = split_alternate("Fossils or Minerals, as");
        assert_eq!(norm(&head).unwrap(), "Fossils");
        assert_eq!(norm(&alt.unwrap()).unwrap(), "Minerals");
        assert_eq!(split_alternate(", or the"), (", or the".to_string(), None));
        assert_eq!(split_alternate("Salts, as").1, None);
    }

    #[test]
    fn cues() {
        let config = GrammarConfig::default();
        assert_eq!(match_cue("and their Phænomena, as", &config).as_deref(), Some("and their"));
        assert_eq!(match_cue("Their Gods", &config).as_deref(), Some("their"));
        assert_eq!(match_cue("Ministers thereof ;", &config).as_deref(), Some("thereof"));
        assert_eq!(
            match_cue("with Operations relating to 'em, as", &config).as_deref(),
            Some("with operations relating to 'em")
        );
        assert_eq!(match_cue("whence", &config).as_deref(), Some("whence"));
        assert_eq!(match_cue("Its Strata, as", &config), None);
        assert_eq!(match_cue("Salts, as", &config), None);
        assert_eq!(leading_keyword(", or the").as_deref(), Some("or"));
    }
}
