use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::CreditLedger;
use crate::verdict::{LanguageId, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParticipantStatus {
    Active,
    /// Budget exhausted (or forcibly ended by the arena).
    Terminated,
    /// Ended by the agent's own TERMINATE action.
    Withdrawn,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("participant is {0:?}, not Active")]
pub struct StatusError(pub ParticipantStatus);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmissionRecord {
    pub problem_id: String,
    pub turn_index: u64,
    pub verdict: Verdict,
    pub passed: usize,
    pub total: usize,
    pub language_id: LanguageId,
    /// Hex SHA-256 of the submitted source.
    pub source_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantState {
    pub id: String,
    pub ledger: CreditLedger,
    pub solved: BTreeSet<String>,
    pub submissions: Vec<SubmissionRecord>,
    pub status: ParticipantStatus,
}

impl ParticipantState {
    pub fn new(id: impl Into<String>) -> Self {
        ParticipantState {
            id: id.into(),
            ledger: CreditLedger::new(),
            solved: BTreeSet::new(),
            submissions: Vec::new(),
            status: ParticipantStatus::Active,
        }
    }

    pub fn is_active(&self) -> bool {
        self.status == ParticipantStatus::Active
    }

    pub fn terminate(&mut self) -> Result<(), StatusError> {
        self.leave(ParticipantStatus::Terminated)
    }

    pub fn withdraw(&mut self) -> Result<(), StatusError> {
        self.leave(ParticipantStatus::Withdrawn)
    }

    fn leave(&mut self, to: ParticipantStatus) -> Result<(), StatusError> {
        if self.status != ParticipantStatus::Active {
            return Err(StatusError(self.status));
        }
        self.status = to;
        Ok(())
    }

    /// Records a judged submission; an AC marks the problem solved.
    pub fn record_submission(&mut self, record: SubmissionRecord) {
        if record.verdict.is_accepted() {
            self.solved.insert(record.problem_id.clone());
        }
        self.submissions.push(record);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_transitions_are_one_way() {
        let mut p = ParticipantState::new("a");
        assert!(p.is_active());
        p.withdraw().unwrap();
        assert_eq!(
            p.terminate(),
            Err(StatusError(ParticipantStatus::Withdrawn))
        );
        assert_eq!(p.withdraw(), Err(StatusError(ParticipantStatus::Withdrawn)));

        let mut q = ParticipantState::new("b");
        q.terminate().unwrap();
        assert_eq!(
            q.withdraw(),
            Err(StatusError(ParticipantStatus::Terminated))
        );
    }

    #[test]
    fn only_accepted_submissions_solve() {
        let mut p = ParticipantState::new("a");
        let mut rec = SubmissionRecord {
            problem_id: "b1".into(),
            turn_index: 1,
            verdict: Verdict::WA,
            passed: 2,
            total: 5,
            language_id: LanguageId::Python3,
            source_hash: String::new(),
        };
        p.record_submission(rec.clone());
        assert!(p.solved.is_empty());
        rec.verdict = Verdict::AC;
        rec.passed = 5;
        p.record_submission(rec);
        assert!(p.solved.contains("b1"));
        assert_eq!(p.submissions.len(), 2);
    }
}
