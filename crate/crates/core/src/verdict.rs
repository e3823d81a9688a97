use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// ICPC verdict for a submission or a single test case. Only `AC` scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    AC,
    WA,
    TLE,
    MLE,
    RE,
    CE,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::AC,
        Verdict::WA,
        Verdict::TLE,
        Verdict::MLE,
        Verdict::RE,
        Verdict::CE,
    ];

    pub fn is_accepted(self) -> bool {
        self == Verdict::AC
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AC => "AC",
            Verdict::WA => "WA",
            Verdict::TLE => "TLE",
            Verdict::MLE => "MLE",
            Verdict::RE => "RE",
            Verdict::CE => "CE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Verdict::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown verdict `{s}`"))
    }
}

/// Submission languages the contest accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageId {
    Cpp17,
    Java,
    Python3,
}

impl LanguageId {
    pub const ALL: [LanguageId; 3] = [LanguageId::Cpp17, LanguageId::Java, LanguageId::Python3];

    pub fn as_str(self) -> &'static str {
        match self {
            LanguageId::Cpp17 => "cpp17",
            LanguageId::Java => "java",
            LanguageId::Python3 => "python3",
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LanguageId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageId::ALL
            .into_iter()
            .find(|l| l.as_str() == s.trim())
            .ok_or_else(|| format!("unsupported language `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_round_trips_through_str() {
        for v in Verdict::ALL {
            assert_eq!(v.as_str().parse::<Verdict>().unwrap(), v);
        }
        assert_eq!(Verdict::ALL.iter().filter(|v| v.is_accepted()).count(), 1);
    }

    #[test]
    fn language_rejects_unknown_ids() {
        assert_eq!("cpp17".parse::<LanguageId>().unwrap(), LanguageId::Cpp17);
        assert!("rust".parse::<LanguageId>().is_err());
        assert!("C++17".parse::<LanguageId>().is_err());
    }
}
