//! Turn-based agent protocol: state snapshots, action parsing and dispatch
//! to the judge, the hint library and the ledger, over stdio or TCP.

mod action;
mod error;
mod session;
mod snapshot;
pub mod wire;

pub use action::{
    action_from_value, parse_action, parse_language, ActionKind, ActionRequest, HintParams,
};
pub use error::{ErrorCode, ProtocolError};
pub use session::{
    ActionResult, Clock, ManualClock, Payload, Services, Session, Standings, UsageAck, UsageReport,
};
pub use snapshot::{render_state, ProblemEntry, RulesDigest, StateSnapshot, StatusView};
