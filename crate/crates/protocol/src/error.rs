use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    UnknownAction,
    MissingParameter,
    InvalidParameter,
    UnknownProblem,
    UnsupportedLanguage,
    UnknownModel,
    AlreadySolved,
    NoHintMatch,
    NotActive,
    TurnTimeout,
    BudgetExhausted,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Malformed => "malformed",
            ErrorCode::UnknownAction => "unknown_action",
            ErrorCode::MissingParameter => "missing_parameter",
            ErrorCode::InvalidParameter => "invalid_parameter",
            ErrorCode::UnknownProblem => "unknown_problem",
            ErrorCode::UnsupportedLanguage => "unsupported_language",
            ErrorCode::UnknownModel => "unknown_model",
            ErrorCode::AlreadySolved => "already_solved",
            ErrorCode::NoHintMatch => "no_hint_match",
            ErrorCode::NotActive => "not_active",
            ErrorCode::TurnTimeout => "turn_timeout",
            ErrorCode::BudgetExhausted => "budget_exhausted",
            ErrorCode::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub message: String,
}

impl ProtocolError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ProtocolError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ProtocolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}
