//! Label folding and slug rules shared by matching and IRI minting.

use deunicode::deunicode;

/// Lower-cases and collapses internal whitespace.
pub fn case_fold(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Case fold plus diacritic and ligature folding ("Phænomena" -> "phaenomena").
pub fn fold(label: &str) -> String {
    case_fold(&deunicode(label))
}

/// Reduces a label to a path segment: folded to ASCII lower case, apostrophes
/// dropped, every run of other non-alphanumerics collapsed to one hyphen, no
/// leading or trailing hyphen. May return an empty string.
pub fn slug(label: &str) -> String {
    let ascii = deunicode(label).to_lowercase();
    let mut out = String::with_capacity(ascii.len());
    let mut pending_hyphen = false;
    for c in ascii.chars() {
        if c == '\'' {
            continue;
        }
        if c.is_ascii_alphanumeric() {
            if pending_hyphen && !out.is_empty() {
                out.push('-');
            }
            pending_hyphen = false;
            out.push(c);
        } else {
            pending_hyphen = true;
        }
    }
    out
}

/// "GEOMETRY" -> "Geometry"; mixed-case input is returned unchanged.
pub fn display_case(label: &str) -> String {
    if label.chars().any(|c| c.is_lowercase()) {
        return label.to_string();
    }
    label
        .split(' ')
        .map(|word| {
            let mut chars = word.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().chain(chars.flat_map(char::to_lowercase)).collect(),
                None => String::new(),
            }
        })
        .collect::<Vec<String>>()
        .join(" ")
}
