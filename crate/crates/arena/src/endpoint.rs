//! Anything that can take turns in a match.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use arena_protocol::wire::{parse_client_line, ClientMessage, ServerMessage};
use arena_protocol::{
    ActionRequest, ActionResult, ProtocolError, StateSnapshot, UsageAck, UsageReport,
};

use crate::agents::{AgentsFile, ScriptedAgent, StrategyKind, StrategyProfile};
use crate::ArenaError;

/// What the agent wants to do this turn.
#[derive(Debug, Clone, PartialEq)]
pub enum Proposal {
    Action(ActionRequest),
    /// Unparsed wire text; a parse failure still consumes the turn.
    Raw(String),
    /// Nothing arrived before the turn timeout.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentTurn {
    pub proposal: Proposal,
    /// Usage attached to the action and charged before it runs.
    pub usage: Option<UsageReport>,
}

/// Callback that charges a standalone usage report.
pub type UsageSink<'a> = dyn FnMut(&UsageReport) -> Result<UsageAck, ProtocolError> + 'a;

pub trait AgentEndpoint: Send {
    /// Participant name used when the endpoint joins a match.
    fn name(&self) -> String;

    /// How the agent was specified, e.g. `scripted:greedy`.
    fn descriptor(&self) -> String;

    fn kind(&self) -> Option<StrategyKind> {
        None
    }

    fn act(
        &mut self,
        snapshot: &StateSnapshot,
        report: &mut UsageSink<'_>,
    ) -> Result<AgentTurn, ArenaError>;

    fn observe(&mut self, _result: &ActionResult) -> Result<(), ArenaError> {
        Ok(())
    }

    fn finish(&mut self, _reason: &str, _state: &StateSnapshot) {}
}

impl AgentEndpoint for ScriptedAgent {
    fn name(&self) -> String {
        self.profile().name.clone()
    }

    fn descriptor(&self) -> String {
        format!("scripted:{}", self.profile().name)
    }

    fn kind(&self) -> Option<StrategyKind> {
        Some(self.profile().kind)
    }

    fn act(
        &mut self,
        snapshot: &StateSnapshot,
        _report: &mut UsageSink<'_>,
    ) -> Result<AgentTurn, ArenaError> {
        let (action, usage) = self.step(snapshot);
        Ok(AgentTurn {
            proposal: Proposal::Action(action),
            usage,
        })
    }
}

/// A child process speaking the line protocol on stdin and stdout, the
/// same wire `arena serve --transport stdio` exposes.
pub struct ProcessAgent {
    name: String,
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    turn_timeout: Duration,
}

impl ProcessAgent {
    pub fn spawn(name: &str, command: &str, turn_timeout: Duration) -> Result<Self, ArenaError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| ArenaError::Agent {
                agent: name.to_string(),
                message: format!("cannot spawn: {e}"),
            })?;
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ProcessAgent {
            name: name.to_string(),
            command: command.to_string(),
            stdin: child.stdin.take(),
            child,
            lines,
            turn_timeout,
        })
    }

    fn fail(&self, message: impl Into<String>) -> ArenaError {
        ArenaError::Agent {
            agent: self.name.clone(),
            message: message.into(),
        }
    }

    fn send(&mut self, msg: &ServerMessage) -> Result<(), ArenaError> {
        let stdin = self.stdin.as_mut().ok_or_else(|| ArenaError::Agent {
            agent: self.name.clone(),
            message: "stdin already closed".into(),
        })?;
        let mut line = serde_json::to_vec(msg).expect("server messages serialize");
        line.push(b'\n');
        stdin
            .write_all(&line)
            .and_then(|_| stdin.flush())
            .map_err(|e| ArenaError::Agent {
                agent: self.name.clone(),
                message: format!("write failed: {e}"),
            })
    }
}

impl AgentEndpoint for ProcessAgent {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn descriptor(&self) -> String {
        format!("cmd:{}", self.command)
    }

    fn act(
        &mut self,
        snapshot: &StateSnapshot,
        report: &mut UsageSink<'_>,
    ) -> Result<AgentTurn, ArenaError> {
        self.send(&ServerMessage::State {
            state: Box::new(snapshot.clone()),
        })?;
        let deadline = Instant::now() + self.turn_timeout;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            let line = match self.lines.recv_timeout(left) {
                Ok(Ok(line)) => line,
                Ok(Err(e)) => return Err(self.fail(format!("read failed: {e}"))),
                Err(RecvTimeoutError::Timeout) => {
                    return Ok(AgentTurn {
                        proposal: Proposal::Skip,
                        usage: None,
                    })
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(self.fail("process closed its output"))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match parse_client_line(&line) {
                Ok(ClientMessage::Hello { .. }) => {}
                Ok(ClientMessage::Usage(usage)) => {
                    let msg = match report(&usage) {
                        Ok(ack) => ServerMessage::UsageAck { ack },
                        Err(error) => ServerMessage::Error { error },
                    };
                    self.send(&msg)?;
                }
                Ok(ClientMessage::Action { raw, usage }) => {
                    let text = String::from_utf8_lossy(&raw).into_owned();
                    return Ok(AgentTurn {
                        proposal: Proposal::Raw(text),
                        usage,
                    });
                }
                Err(error) => self.send(&ServerMessage::Error { error })?,
            }
        }
    }

    fn observe(&mut self, result: &ActionResult) -> Result<(), ArenaError> {
        self.send(&ServerMessage::Result {
            result: Box::new(result.clone()),
        })
    }

    fn finish(&mut self, reason: &str, state: &StateSnapshot) {
        let _ = self.send(&ServerMessage::End {
            reason: reason.to_string(),
            state: Box::new(state.clone()),
        });
        self.stdin.take();
        let deadline = Instant::now() + Duration::from_secs(2);
        while Instant::now() < deadline {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(20));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for ProcessAgent {
    fn drop(&mut self) {
        if let Ok(None) = self.child.try_wait() {
            let _ = self.child.kill();
            let _ = self.child.wait();
        }
    }
}

/// A recipe for building fresh endpoints, one per match.
#[derive(Debug, Clone)]
pub enum AgentSource {
    Scripted(StrategyProfile),
    Command {
        name: String,
        command: String,
        turn_timeout: Duration,
    },
}

impl AgentSource {
    /// Parses `scripted:<name>` (looked up in `agents`) or `cmd:<shell command>`.
    pub fn resolve(
        endpoint: &str,
        agents: Option<&AgentsFile>,
        turn_timeout: Duration,
    ) -> Result<Self, ArenaError> {
        if let Some(name) = endpoint.strip_prefix("scripted:") {
            let file = agents.ok_or_else(|| {
                ArenaError::UnknownAgent(format!("{endpoint} (no agents file given)"))
            })?;
            return Ok(AgentSource::Scripted(file.profile(name)?));
        }
        if let Some(command) = endpoint.strip_prefix("cmd:") {
            let name = command.split_whitespace().last().unwrap_or("agent");
            let name = name
                .rsplit('/')
                .next()
                .unwrap_or(name)
                .trim_end_matches(".py")
                .to_string();
            return Ok(AgentSource::Command {
                name,
                command: command.to_string(),
                turn_timeout,
            });
        }
        Err(ArenaError::UnknownAgent(endpoint.to_string()))
    }

    pub fn name(&self) -> &str {
        match self {
            AgentSource::Scripted(p) => &p.name,
            AgentSource::Command { name, .. } => name,
        }
    }

    /// Builds an endpoint for one match. Scripted seeds are mixed with the
    /// match seed so a series explores different random walks.
    pub fn instantiate(&self, match_seed: u64) -> Result<Box<dyn AgentEndpoint>, ArenaError> {
        match self {
            AgentSource::Scripted(profile) => {
                let seed = profile.parameters.seed ^ match_seed;
                Ok(Box::new(ScriptedAgent::new(
                    profile.clone().with_seed(seed),
                )?))
            }
            AgentSource::Command {
                name,
                command,
                turn_timeout,
            } => Ok(Box::new(ProcessAgent::spawn(name, command, *turn_timeout)?)),
        }
    }
}
