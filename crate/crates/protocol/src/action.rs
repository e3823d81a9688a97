use std::fmt;

use arena_core::{DifficultyLevel, LanguageId};
use arena_hints::HintRequest;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ErrorCode, ProtocolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ActionKind {
    ViewProblem,
    GetHint,
    SubmitSolution,
    TestCode,
    Terminate,
}

impl ActionKind {
    pub const ALL: [ActionKind; 5] = [
        ActionKind::ViewProblem,
        ActionKind::GetHint,
        ActionKind::SubmitSolution,
        ActionKind::TestCode,
        ActionKind::Terminate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::ViewProblem => "VIEW_PROBLEM",
            ActionKind::GetHint => "GET_HINT",
            ActionKind::SubmitSolution => "SUBMIT_SOLUTION",
            ActionKind::TestCode => "TEST_CODE",
            ActionKind::Terminate => "TERMINATE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ActionKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn description(self) -> &'static str {
        match self {
            ActionKind::ViewProblem => "View problem details.",
            ActionKind::GetHint => {
                "Get a hint for a problem (consumes credit). Levels 0-4 are available."
            }
            ActionKind::SubmitSolution => "Submit a solution.",
            ActionKind::TestCode => "Test code with custom test cases (consumes credit).",
            ActionKind::Terminate => "End participation.",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HintParams {
    pub hint_level: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint_knowledge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_difficulty: Option<DifficultyLevel>,
}

impl From<&HintParams> for HintRequest {
    fn from(p: &HintParams) -> Self {
        HintRequest {
            level: p.hint_level,
            problem_id: p.problem_id.clone(),
            hint_knowledge: p.hint_knowledge.clone(),
            problem_difficulty: p.problem_difficulty,
        }
    }
}

/// An agent's move. Serializes to the wire shape
/// `{"action": "...", "parameters": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "action",
    content = "parameters",
    rename_all = "SCREAMING_SNAKE_CASE"
)]
pub enum ActionRequest {
    ViewProblem {
        problem_id: String,
    },
    GetHint(HintParams),
    SubmitSolution {
        problem_id: String,
        language: String,
        source: String,
    },
    TestCode {
        language: String,
        source: String,
        test_cases: Vec<String>,
        /// Limits are taken from this problem when given.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        problem_id: Option<String>,
    },
    Terminate,
}

impl ActionRequest {
    pub fn kind(&self) -> ActionKind {
        match self {
            ActionRequest::ViewProblem { .. } => ActionKind::ViewProblem,
            ActionRequest::GetHint(_) => ActionKind::GetHint,
            ActionRequest::SubmitSolution { .. } => ActionKind::SubmitSolution,
            ActionRequest::TestCode { .. } => ActionKind::TestCode,
            ActionRequest::Terminate => ActionKind::Terminate,
        }
    }

    pub fn problem_id(&self) -> Option<&str> {
        match self {
            ActionRequest::ViewProblem { problem_id }
            | ActionRequest::SubmitSolution { problem_id, .. } => Some(problem_id),
            ActionRequest::GetHint(p) => p.problem_id.as_deref(),
            ActionRequest::TestCode { problem_id, .. } => problem_id.as_deref(),
            ActionRequest::Terminate => None,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("actions always serialize")
    }
}

/// Accepts the canonical ids plus a few common spellings.
pub fn parse_language(s: &str) -> Option<LanguageId> {
    match s.trim().to_ascii_lowercase().as_str() {
        "cpp17" | "c++17" | "cpp" | "c++" => Some(LanguageId::Cpp17),
        "java" => Some(LanguageId::Java),
        "python3" | "python" | "py3" => Some(LanguageId::Python3),
        _ => None,
    }
}

/// Parses one wire message into an action, reporting malformed JSON,
/// unknown actions and missing or ill-typed parameters as typed errors.
pub fn parse_action(raw: &[u8]) -> Result<ActionRequest, ProtocolError> {
    let value: Value = serde_json::from_slice(raw)
        .map_err(|e| ProtocolError::new(ErrorCode::Malformed, format!("not valid JSON: {e}")))?;
    action_from_value(value)
}

pub fn action_from_value(mut value: Value) -> Result<ActionRequest, ProtocolError> {
    let obj = value
        .as_object_mut()
        .ok_or_else(|| ProtocolError::new(ErrorCode::Malformed, "message must be a JSON object"))?;
    let name = match obj.get("action") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            return Err(ProtocolError::new(
                ErrorCode::Malformed,
                "`action` must be a string",
            ))
        }
        None => {
            return Err(ProtocolError::new(
                ErrorCode::Malformed,
                "missing `action` field",
            ))
        }
    };
    let kind = ActionKind::parse(&name).ok_or_else(|| {
        ProtocolError::new(ErrorCode::UnknownAction, format!("unknown action `{name}`"))
    })?;
    let parameters = match obj.remove("parameters") {
        None | Some(Value::Null) => Value::Object(Default::default()),
        Some(p @ Value::Object(_)) => p,
        Some(_) => {
            return Err(ProtocolError::new(
                ErrorCode::Malformed,
                "`parameters` must be an object",
            ))
        }
    };
    let request = if kind == ActionKind::Terminate {
        ActionRequest::Terminate
    } else {
        let mut wrapped = serde_json::Map::new();
        wrapped.insert("action".into(), Value::String(name));
        wrapped.insert("parameters".into(), parameters);
        serde_json::from_value(Value::Object(wrapped)).map_err(parameter_error)?
    };
    validate(&request)?;
    Ok(request)
}

fn parameter_error(e: serde_json::Error) -> ProtocolError {
    let message = e.to_string();
    match message
        .strip_prefix("missing field `")
        .and_then(|rest| rest.split('`').next())
    {
        Some(field) => ProtocolError::new(
            ErrorCode::MissingParameter,
            format!("missing parameter `{field}`"),
        ),
        None => ProtocolError::new(ErrorCode::InvalidParameter, message),
    }
}

fn validate(request: &ActionRequest) -> Result<(), ProtocolError> {
    let missing = |field: &str| {
        ProtocolError::new(
            ErrorCode::MissingParameter,
            format!("missing parameter `{field}`"),
        )
    };
    match request {
        ActionRequest::GetHint(p) => {
            let blank = |s: &Option<String>| s.as_deref().is_none_or(|s| s.trim().is_empty());
            match p.hint_level {
                0 => {}
                1 | 3 if blank(&p.problem_id) => return Err(missing("problem_id")),
                2 if blank(&p.hint_knowledge) => return Err(missing("hint_knowledge")),
                4 if blank(&p.hint_knowledge) => return Err(missing("hint_knowledge")),
                4 if p.problem_difficulty.is_none() => return Err(missing("problem_difficulty")),
                1..=4 => {}
                other => {
                    return Err(ProtocolError::new(
                        ErrorCode::InvalidParameter,
                        format!("hint_level {other} is out of range (0..=4)"),
                    ))
                }
            }
        }
        ActionRequest::TestCode { test_cases, .. } if test_cases.is_empty() => {
            return Err(ProtocolError::new(
                ErrorCode::InvalidParameter,
                "test_cases must not be empty",
            ));
        }
        _ => {}
    }
    Ok(())
}
