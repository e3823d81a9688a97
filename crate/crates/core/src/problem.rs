use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::level::DifficultyLevel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub input: Vec<u8>,
    pub expected_output: Vec<u8>,
}

impl TestCase {
    pub fn new(input: impl Into<Vec<u8>>, expected_output: impl Into<Vec<u8>>) -> Self {
        TestCase {
            input: input.into(),
            expected_output: expected_output.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    pub level: DifficultyLevel,
    pub statement: String,
    /// Public examples shown with the statement. Never used for verdicts.
    pub samples: Vec<TestCase>,
    /// Verdict-determining cases, judged in this order.
    pub hidden_tests: Vec<TestCase>,
    pub time_limit_ms: u64,
    pub memory_limit_mib: u64,
}

impl Problem {
    /// SHA-256 over the problem's full content, hex encoded. Stable across
    /// reloads of the same manifest.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        let mut field = |bytes: &[u8]| {
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(bytes);
        };
        field(self.id.as_bytes());
        field(self.level.as_str().as_bytes());
        field(self.statement.as_bytes());
        field(&self.time_limit_ms.to_le_bytes());
        field(&self.memory_limit_mib.to_le_bytes());
        for case in self.samples.iter().chain(&self.hidden_tests) {
            field(&case.input);
            field(&case.expected_output);
        }
        hex::encode(hasher.finalize())
    }

    /// Statement followed by the sample inputs and outputs, as plain text.
    pub fn statement_with_samples(&self) -> String {
        let mut text = self.statement.clone();
        for (i, case) in self.samples.iter().enumerate() {
            text.push_str(&format!(
                "\n\nSample input {}:\n{}\nSample output {}:\n{}",
                i + 1,
                String::from_utf8_lossy(&case.input),
                i + 1,
                String::from_utf8_lossy(&case.expected_output)
            ));
        }
        text
    }
}

/// Trailing whitespace on each line and trailing blank lines are ignored;
/// everything else must match byte for byte.
pub fn outputs_match(actual: &[u8], expected: &[u8]) -> bool {
    normalized_lines(actual).eq(normalized_lines(expected))
}

fn normalized_lines(bytes: &[u8]) -> impl Iterator<Item = &[u8]> {
    let lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').map(trim_end).collect();
    let keep = lines
        .iter()
        .rposition(|l| !l.is_empty())
        .map_or(0, |i| i + 1);
    lines.into_iter().take(keep)
}

fn trim_end(line: &[u8]) -> &[u8] {
    let end = line
        .iter()
        .rposition(|b| !b.is_ascii_whitespace())
        .map_or(0, |i| i + 1);
    &line[..end]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_whitespace_and_blank_lines_are_ignored() {
        assert!(outputs_match(b"1 2\n3\n", b"1 2\n3"));
        assert!(outputs_match(b"1 2  \r\n3\t\n\n\n", b"1 2\n3\n"));
        assert!(outputs_match(b"", b"\n\n"));
    }

    #[test]
    fn inner_differences_are_not_ignored() {
        assert!(!outputs_match(b"1  2\n", b"1 2\n"));
        assert!(!outputs_match(b" 1\n", b"1\n"));
        assert!(!outputs_match(b"1\n\n2\n", b"1\n2\n"));
        assert!(!outputs_match(b"12", b"1"));
    }

    #[test]
    fn checksum_depends_on_hidden_data() {
        let mut p = Problem {
            id: "p".into(),
            level: DifficultyLevel::Gold,
            statement: "s".into(),
            samples: vec![],
            hidden_tests: vec![TestCase::new("1", "1")],
            time_limit_ms: 1000,
            memory_limit_mib: 256,
        };
        let before = p.checksum();
        assert_eq!(before, p.clone().checksum());
        p.hidden_tests[0].expected_output = b"2".to_vec();
        assert_ne!(before, p.checksum());
    }
}
