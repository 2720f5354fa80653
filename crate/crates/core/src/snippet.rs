//! Source-code snippets, the unit all pipelines consume.

use serde::{Deserialize, Serialize};

/// Source language of a snippet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Language {
    C,
    Cpp,
    Python,
    Unknown,
}

impl Language {
    /// Guess a language from a file extension (`c`, `h`, `cpp`, `py`, ...).

    pub fn from_extension(ext: &str) -> Language {
        match ext.to_ascii_lowercase().as_str() {
            "c" | "h" => Language::C,
            "cc" | "cpp" | "cxx" | "hpp" | "hh" | "hxx" => Language::Cpp,
            "py" => Language::Python,
            _ => Language::Unknown,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Language::C => "c",
            Language::Cpp => "cpp",
            Language::Python => "python",
            Language::Unknown => "unknown",
        }
    }
}

impl std::str::FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(Language::C),
            "cpp" | "c++" | "cxx" => Ok(Language::Cpp),
            "python" | "py" => Ok(Language::Python),
            "unknown" => Ok(Language::Unknown),
            other => Err(format!("unrecognized language: {other}")),
        }
    }
}

/// A piece of source text tagged with its language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSnippet {
    pub source: String,
    pub language: Language,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

impl CodeSnippet {
    pub fn new(source: impl Into<String>, language: Language) -> Self {
        Self {
            source: source.into(),
            language,
            id: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }
}
