use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// USACO division of a problem. Ordered from easiest to hardest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DifficultyLevel {
    Bronze,
    Silver,
    Gold,
    Platinum,
}

impl DifficultyLevel {
    pub const ALL: [DifficultyLevel; 4] = [
        DifficultyLevel::Bronze,
        DifficultyLevel::Silver,
        DifficultyLevel::Gold,
        DifficultyLevel::Platinum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DifficultyLevel::Bronze => "Bronze",
            DifficultyLevel::Silver => "Silver",
            DifficultyLevel::Gold => "Gold",
            DifficultyLevel::Platinum => "Platinum",
        }
    }
}

impl fmt::Display for DifficultyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DifficultyLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bronze" => Ok(DifficultyLevel::Bronze),
            "silver" => Ok(DifficultyLevel::Silver),
            "gold" => Ok(DifficultyLevel::Gold),
            "platinum" => Ok(DifficultyLevel::Platinum),
            other => Err(format!("unknown difficulty level `{other}`")),
        }
    }
}

/// One value per difficulty level. Serializes as a map keyed by level name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerLevel<T> {
    #[serde(rename = "Bronze")]
    pub bronze: T,
    #[serde(rename = "Silver")]
    pub silver: T,
    #[serde(rename = "Gold")]
    pub gold: T,
    #[serde(rename = "Platinum")]
    pub platinum: T,
}

impl<T: Copy> PerLevel<T> {
    pub const fn new(bronze: T, silver: T, gold: T, platinum: T) -> Self {
        PerLevel {
            bronze,
            silver,
            gold,
            platinum,
        }
    }

    pub fn get(&self, level: DifficultyLevel) -> T {
        match level {
            DifficultyLevel::Bronze => self.bronze,
            DifficultyLevel::Silver => self.silver,
            DifficultyLevel::Gold => self.gold,
            DifficultyLevel::Platinum => self.platinum,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (DifficultyLevel, T)> + '_ {
        DifficultyLevel::ALL
            .into_iter()
            .map(move |l| (l, self.get(l)))
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> PerLevel<U> {
        PerLevel::new(
            f(self.bronze),
            f(self.silver),
            f(self.gold),
            f(self.platinum),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_are_totally_ordered() {
        use DifficultyLevel::*;
        assert!(Bronze < Silver && Silver < Gold && Gold < Platinum);
        assert_eq!(DifficultyLevel::ALL.len(), 4);
    }

    #[test]
    fn parses_case_insensitively() {
        assert_eq!(
            "bronze".parse::<DifficultyLevel>().unwrap(),
            DifficultyLevel::Bronze
        );
        assert_eq!(
            " PLATINUM ".parse::<DifficultyLevel>().unwrap(),
            DifficultyLevel::Platinum
        );
        assert!("diamond".parse::<DifficultyLevel>().is_err());
    }

    #[test]
    fn per_level_serializes_as_level_map() {
        let w = PerLevel::new(1u64, 2, 5, 10);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"Bronze":1,"Silver":2,"Gold":5,"Platinum":10}"#);
    }
}
