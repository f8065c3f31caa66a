use thiserror::Error;

const DEFAULT_NESTING_CUES: &[&str] = &["their", "thereof", "with operations relating to 'em", "whence", "and their"];

const DEFAULT_STOP_WORDS: &[&str] = &["its", "their", "the", "and", "as", "with", "whence", "in", "thereof", "relating to 'em"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("grammar config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Word lists steering facet nesting and facet-label normalization.
///
/// Entries may be multi-word phrases. Matching is case-insensitive and
/// ignores surrounding punctuation; a typographic apostrophe matches `'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarConfig {
    /// Anaphoric cues: a connective that begins or ends with one of these
    /// refers back to the previous facet and nests under it.
    pub nesting_cues: Vec<String>,
    /// Stripped from both ends of a connective to obtain the facet label.
    pub stop_words: Vec<String>,
}

impl Default for GrammarConfig {
    fn default() -> Self {
        GrammarConfig {
            nesting_cues: DEFAULT_NESTING_CUES.iter().map(|s| s.to_string()).collect(),
            stop_words: DEFAULT_STOP_WORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl GrammarConfig {
    /// Reads `key = a, b, c` lines. `nesting_cues` extends the default cue
    /// set; `stop_words` replaces the default stop list. `#` starts a comment.
    pub fn parse(text: &str) -> Result<GrammarConfig, ConfigError> {
        let mut config = GrammarConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            let items: Vec<String> = value
                .split(',')
                .map(|s| s.trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect();
            match key.trim() {
                "nesting_cues" => {
                    for item in items {
                        if !config.nesting_cues.contains(&item) {
                            config.nesting_cues.push(item);
                        }
                    }
                }
                "stop_words" => config.stop_words = items,
                other => {
                    return Err(ConfigError {
                        line: idx + 1,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cues_extend_and_stop_words_replace() {
        let config = GrammarConfig::parse("# local tweaks\nnesting_cues = Hence, their\nstop_words = its, the\n").unwrap();
        assert!(config.nesting_cues.contains(&"hence".to_string()));
        assert!(config.nesting_cues.contains(&"whence".to_string()));
        assert_eq!(config.nesting_cues.iter().filter(|c| *c == "their").count(), 1);
        assert_eq!(config.stop_words, vec!["its", "the"]);
    }

    #[test]
    fn rejects_unknown_keys_and_bare_lines() {
        assert_eq!(GrammarConfig::parse("\ncolour = red").unwrap_err().line, 2);
        assert!(GrammarConfig::parse("nesting_cues").is_err());
    }
}
