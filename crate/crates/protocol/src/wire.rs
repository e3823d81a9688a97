//! Line-delimited JSON transport. Each connection is one participant.
//!
//! Client lines are either an action (`{"action": ..., "parameters": ...,
//! "usage": {...}?}`) or a typed message (`{"type": "hello", "name": ...}`,
//! `{"type": "usage", ...}`). Server lines carry a `type` of `state`,
//! `result`, `usage_ack`, `error` or `end`.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{self, RecvTimeoutError};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ErrorCode, ProtocolError};
use crate::session::{ActionResult, Clock, Services, Session, Standings, UsageAck, UsageReport};
use crate::snapshot::StateSnapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    State {
        state: Box<StateSnapshot>,
    },
    Result {
        result: Box<ActionResult>,
    },
    UsageAck {
        ack: UsageAck,
    },
    Error {
        error: ProtocolError,
    },
    End {
        reason: String,
        state: Box<StateSnapshot>,
    },
}

/// What a client line asks for.
#[derive(Debug, Clone, PartialEq)]
pub enum ClientMessage {
    Hello {
        name: String,
    },
    Usage(UsageReport),
    /// The raw line, parsed later so parse failures consume the turn.
    Action {
        raw: Vec<u8>,
        usage: Option<UsageReport>,
    },
}

pub fn parse_client_line(line: &str) -> Result<ClientMessage, ProtocolError> {
    let value: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        // unparseable text is an action attempt that failed to parse
        Err(_) => {
            return Ok(ClientMessage::Action {
                raw: line.as_bytes().to_vec(),
                usage: None,
            })
        }
    };
    match value.get("type").and_then(Value::as_str) {
        Some("hello") => {
            let name = value
                .get("name")
                .and_then(Value::as_str)
                .filter(|n| !n.trim().is_empty())
                .ok_or_else(|| {
                    ProtocolError::new(ErrorCode::MissingParameter, "hello needs a `name`")
                })?;
            Ok(ClientMessage::Hello {
                name: name.to_string(),
            })
        }
        Some("usage") => serde_json::from_value(value)
            .map(ClientMessage::Usage)
            .map_err(|e| ProtocolError::new(ErrorCode::Malformed, e.to_string())),
        Some(other) => Err(ProtocolError::new(
            ErrorCode::Malformed,
            format!("unknown message type `{other}`"),
        )),
        None => {
            let usage = match value.get("usage") {
                None | Some(Value::Null) => None,
                Some(u) => Some(serde_json::from_value(u.clone()).map_err(|e| {
                    ProtocolError::new(ErrorCode::Malformed, format!("bad usage: {e}"))
                })?),
            };
            Ok(ClientMessage::Action {
                raw: line.as_bytes().to_vec(),
                usage,
            })
        }
    }
}

fn send(out: &mut impl Write, msg: &ServerMessage) -> io::Result<()> {
    serde_json::to_writer(&mut *out, msg)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// Reads lines on a helper thread so each turn can time out.
fn line_channel(reader: impl BufRead + Send + 'static) -> mpsc::Receiver<io::Result<String>> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for line in reader.lines() {
            if tx.send(line).is_err() {
                break;
            }
        }
    });
    rx
}

/// Runs one participant over a line-delimited channel until it withdraws,
/// is terminated, or disconnects. The first line may be a `hello` naming
/// the participant; otherwise `default_name` is used.
pub fn serve_connection(
    services: Arc<Services>,
    standings: Arc<Standings>,
    default_name: &str,
    reader: impl BufRead + Send + 'static,
    mut writer: impl Write,
    turn_timeout: Duration,
) -> io::Result<Session> {
    let lines = line_channel(reader);
    let mut pending: Option<String> = None;
    let name = match lines.recv_timeout(turn_timeout) {
        Ok(Ok(line)) => match parse_client_line(&line) {
            Ok(ClientMessage::Hello { name }) => name,
            _ => {
                pending = Some(line);
                default_name.to_string()
            }
        },
        Ok(Err(e)) => return Err(e),
        Err(_) => default_name.to_string(),
    };
    let mut session = Session::new(services, name, Clock::real()).with_standings(standings);
    send(
        &mut writer,
        &ServerMessage::State {
            state: Box::new(session.snapshot()),
        },
    )?;

    while session.is_active() {
        let line = match pending.take() {
            Some(line) => line,
            None => match lines.recv_timeout(turn_timeout) {
                Ok(Ok(line)) => line,
                Ok(Err(e)) => return Err(e),
                Err(RecvTimeoutError::Timeout) => {
                    let result = session.skip_turn();
                    send(
                        &mut writer,
                        &ServerMessage::Result {
                            result: Box::new(result),
                        },
                    )?;
                    if session.is_active() {
                        send(
                            &mut writer,
                            &ServerMessage::State {
                                state: Box::new(session.snapshot()),
                            },
                        )?;
                    }
                    continue;
                }
                Err(RecvTimeoutError::Disconnected) => return Ok(session),
            },
        };
        if line.trim().is_empty() {
            continue;
        }
        match parse_client_line(&line) {
            Ok(ClientMessage::Hello { .. }) => {
                let error = ProtocolError::new(
                    ErrorCode::Malformed,
                    "hello is only accepted as the first message",
                );
                send(&mut writer, &ServerMessage::Error { error })?;
            }
            Ok(ClientMessage::Usage(report)) => match session.report_usage(&report) {
                Ok(ack) => send(&mut writer, &ServerMessage::UsageAck { ack })?,
                Err(error) => send(&mut writer, &ServerMessage::Error { error })?,
            },
            Ok(ClientMessage::Action { raw, usage }) => {
                let result = session.apply_raw(&raw, usage.as_ref());
                send(
                    &mut writer,
                    &ServerMessage::Result {
                        result: Box::new(result),
                    },
                )?;
                if session.is_active() {
                    send(
                        &mut writer,
                        &ServerMessage::State {
                            state: Box::new(session.snapshot()),
                        },
                    )?;
                }
            }
            Err(error) => send(&mut writer, &ServerMessage::Error { error })?,
        }
    }
    let reason = format!("{:?}", session.participant().status).to_lowercase();
    send(
        &mut writer,
        &ServerMessage::End {
            reason,
            state: Box::new(session.snapshot()),
        },
    )?;
    Ok(session)
}

/// One participant over the process's stdin and stdout.
pub fn serve_stdio(services: Arc<Services>, name: &str) -> io::Result<Session> {
    let timeout = Duration::from_secs(services.contest.config.agent_turn_timeout);
    let standings = Arc::new(Standings::default());
    serve_connection(
        services,
        standings,
        name,
        BufReader::new(io::stdin()),
        io::stdout().lock(),
        timeout,
    )
}

/// Accepts participants over TCP, one session per connection, all sharing
/// one leaderboard. Stops after `max_sessions` connections when given.
pub fn serve_tcp(
    services: Arc<Services>,
    addr: impl ToSocketAddrs,
    max_sessions: Option<usize>,
    on_bound: impl FnOnce(std::net::SocketAddr),
) -> io::Result<Vec<Session>> {
    let listener = TcpListener::bind(addr)?;
    on_bound(listener.local_addr()?);
    let standings = Arc::new(Standings::default());
    let timeout = Duration::from_secs(services.contest.config.agent_turn_timeout);
    let mut handles = Vec::new();
    for (n, stream) in listener.incoming().enumerate() {
        let stream: TcpStream = stream?;
        let (services, standings) = (Arc::clone(&services), Arc::clone(&standings));
        handles.push(thread::spawn(move || {
            let reader = BufReader::new(stream.try_clone()?);
            serve_connection(
                services,
                standings,
                &format!("participant-{}", n + 1),
                reader,
                stream,
                timeout,
            )
        }));
        if max_sessions.is_some_and(|m| n + 1 >= m) {
            break;
        }
    }
    handles
        .into_iter()
        .map(|h| h.join().expect("session thread panicked"))
        .collect()
}
