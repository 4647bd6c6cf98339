//! Signature, named diagrams and an undoable log of applied commands,
//! persisted as canonical JSON.

mod encoding;
mod script;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catcore::{LabelInfo, LabelSignature, SignatureError};
use crate::diagram::{validate, ConeError, Diagram, DiagramError, Violation};
use crate::homotopy::{FailureReport, HomotopyError};

pub use encoding::{decode_diagram, encode_diagram, encode_map, encode_morphism, DecodeError, Decoder};
pub use script::{
    contract_command, expand_command, parse_command, parse_window, parse_split, AssertCommand, Command, ContractArgs,
    DiagramCommand, ExpandArgs, RenderArgs, ScriptEnv, SignatureCommand,
};

pub const FORMAT_VERSION: u64 = 1;
pub const HASH_ALGORITHM: &str = "sha256";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkspaceError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unsupported format version {0}")]
    VersionUnsupported(u64),
    #[error("unsupported hash algorithm `{0}`")]
    HashUnsupported(String),
    #[error("diagram `{name}` failed validation at {} position(s)", violations.len())]
    ValidationFailed { name: String, violations: Vec<Violation> },
    #[error("invalid command: {0}")]
    Command(String),
    #[error("unknown diagram `{0}`")]
    UnknownDiagram(String),
    #[error("diagram `{0}` already exists")]
    DiagramExists(String),
    #[error("invalid diagram name `{0}`")]
    InvalidName(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("log entry {index}: expected hash {expected}, found {found}")]
    LogIntegrity { index: usize, expected: String, found: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl WorkspaceError {
    /// 2 for malformed input, 1 for a command that could not be carried out.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkspaceError::Parse { .. }
            | WorkspaceError::VersionUnsupported(_)
            | WorkspaceError::HashUnsupported(_)
            | WorkspaceError::ValidationFailed { .. }
            | WorkspaceError::Command(_)
            | WorkspaceError::LogIntegrity { .. } => 2,
            _ => 1,
        }
    }

    pub fn report(&self) -> FailureReport {
        if let WorkspaceError::Homotopy(e) = self {
            return e.report();
        }
        let reason = match self {
            WorkspaceError::Parse { .. } => "ParseError",
            WorkspaceError::VersionUnsupported(_) => "VersionUnsupported",
            WorkspaceError::HashUnsupported(_) => "HashUnsupported",
            WorkspaceError::ValidationFailed { .. } => "ValidationFailed",
            WorkspaceError::Command(_) => "InvalidCommand",
            WorkspaceError::UnknownDiagram(_) => "UnknownDiagram",
            WorkspaceError::DiagramExists(_) => "DiagramExists",
            WorkspaceError::InvalidName(_) => "InvalidName",
            WorkspaceError::Signature(_) => "SignatureError",
            WorkspaceError::Diagram(_) => "DiagramError",
            WorkspaceError::Cone(_) => "ConeError",
            WorkspaceError::Homotopy(_) => unreachable!(),
            WorkspaceError::AssertionFailed(_) => "AssertionFailed",
            WorkspaceError::NothingToUndo => "NothingToUndo",
            WorkspaceError::LogIntegrity { .. } => "LogIntegrity",
            WorkspaceError::Io(_) => "IoError",
        };
        FailureReport {
            step: 0,
            height: None,
            reason: reason.to_owned(),
            detail: self.to_string(),
        }
    }
}

/// What a log entry changed, for undo.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Prior {
    pub signature: Option<LabelSignature>,
    /// Previous value of every touched diagram; `None` if it did not exist.
    pub diagrams: BTreeMap<String, Option<Diagram>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub command: String,
    pub before: String,
    pub after: String,
    pub prior: Prior,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Workspace {
    pub signature: LabelSignature,
    pub diagrams: BTreeMap<String, Diagram>,
    pub log: Vec<LogEntry>,
}

/// A failed replay: the workspace after the last successful command and
/// the failing command's index (0-based, counting commands only) and line.
#[derive(Debug, Clone, Error)]
#[error("command {index} (line {line}) `{command}` failed: {error}")]
pub struct ReplayError {
    pub index: usize,
    pub line: usize,
    pub command: String,
    pub error: WorkspaceError,
    pub workspace: Box<Workspace>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn encode_signature(sig: &LabelSignature) -> Value {
    serde_json::to_value(sig).expect("signature serializes")
}

fn encode_diagrams<'a>(entries: impl Iterator<Item = (&'a String, Option<&'a Diagram>)>) -> Value {
    Value::Object(
        entries
            .map(|(k, d)| (k.clone(), d.map_or(Value::Null, encode_diagram)))
            .collect::<Map<_, _>>(),
    )
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> WorkspaceError {
    WorkspaceError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '/' || c.is_control())
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Result<&Diagram, WorkspaceError> {
        self.diagrams.get(name).ok_or_else(|| WorkspaceError::UnknownDiagram(name.to_owned()))
    }

    /// Canonical JSON of the signature and diagrams.
    pub fn state_value(&self) -> Value {
        json!({
            "diagrams": encode_diagrams(self.diagrams.iter().map(|(k, d)| (k, Some(d)))),
            "signature": encode_signature(&self.signature),
        })
    }

    /// Hash of the signature and diagrams, independent of the log.
    pub fn content_hash(&self) -> String {
        sha256_hex(serde_json::to_string(&self.state_value()).expect("json").as_bytes())
    }

    pub fn to_value(&self) -> Value {
        let log: Vec<Value> = self
            .log
            .iter()
            .map(|e| {
                let mut prior = Map::new();
                prior.insert(
                    "diagrams".into(),
                    encode_diagrams(e.prior.diagrams.iter().map(|(k, d)| (k, d.as_ref()))),
                );
                if let Some(sig) = &e.prior.signature {
                    prior.insert("signature".into(), encode_signature(sig));
                }
                json!({"after": e.after, "before": e.before, "command": e.command, "prior": prior})
            })
            .collect();
        json!({
            "diagrams": encode_diagrams(self.diagrams.iter().map(|(k, d)| (k, Some(d)))),
            "format_version": FORMAT_VERSION,
            "hash_algorithm": HASH_ALGORITHM,
            "log": log,
            "signature": encode_signature(&self.signature),
        })
    }

    /// Canonical bytes: sorted keys, no insignificant whitespace.
    pub fn save(&self) -> Vec<u8> {
        serde_json::to_vec(&self.to_value()).expect("json")
    }

    pub fn load(bytes: &[u8]) -> Result<Self, WorkspaceError> {
        let v: Value = serde_json::from_slice(bytes)
            .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, WorkspaceError> {
        let obj = v.as_object().ok_or_else(|| parse_error("/", "expected an object"))?;
        for k in obj.keys() {
            if !["diagrams", "format_version", "hash_algorithm", "log", "signature"].contains(&k.as_str()) {
                return Err(parse_error("/", format!("unexpected field `{k}`")));
            }
        }
        let version = obj
            .get("format_version")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_error("/format_version", "missing or not an integer"))?;
        if version != FORMAT_VERSION {
            return Err(WorkspaceError::VersionUnsupported(version));
        }
        match obj.get("hash_algorithm").map(|h| h.as_str()) {
            None | Some(Some(HASH_ALGORITHM)) => {}
            Some(other) => return Err(WorkspaceError::HashUnsupported(other.unwrap_or("?").to_owned())),
        }
        let signature = decode_signature(obj.get("signature").unwrap_or(&Value::Null), "/signature")?;
        let mut decoder = Decoder::new();
        let diagrams = decode_diagrams(&mut decoder, obj.get("diagrams").unwrap_or(&json!({})), "/diagrams", false)?
            .into_iter()
            .map(|(k, d)| (k, d.expect("non-null")))
            .collect::<BTreeMap<_, _>>();
        for (name, d) in &diagrams {
            validate(&signature, d).map_err(|violations| WorkspaceError::ValidationFailed {
                name: name.clone(),
                violations,
            })?;
        }
        let mut log = Vec::new();
        let entries = match obj.get("log") {
            None => &[][..],
            Some(Value::Array(items)) => &items[..],
            Some(_) => return Err(parse_error("/log", "expected an array")),
        };
        for (i, e) in entries.iter().enumerate() {
            let at = format!("/log/{i}");
            let string = |key: &str| {
                e.get(key)
                    .and_then(Value::as_str)
                    .map(str::to_owned)
                    .ok_or_else(|| parse_error(format!("{at}/{key}"), "expected a string"))
            };
            let prior_v = e.get("prior").ok_or_else(|| parse_error(&at, "missing `prior`"))?;
            let prior = Prior {
                signature: match prior_v.get("signature") {
                    Some(s) => Some(decode_signature(s, &format!("{at}/prior/signature"))?),
                    None => None,
                },
                diagrams: decode_diagrams(
                    &mut decoder,
                    prior_v.get("diagrams").unwrap_or(&json!({})),
                    &format!("{at}/prior/diagrams"),
                    true,
                )?,
            };
            log.push(LogEntry {
                command: string("command")?,
                before: string("before")?,
                after: string("after")?,
                prior,
            });
        }
        Ok(Workspace { signature, diagrams, log })
    }

    /// Checks that undoing the log step by step reproduces every recorded
    /// hash.
    pub fn verify_log(&self) -> Result<(), WorkspaceError> {
        let mut w = self.clone();
        for index in (0..self.log.len()).rev() {
            let found = w.content_hash();
            let expected = &self.log[index].after;
            if &found != expected {
                return Err(WorkspaceError::LogIntegrity {
                    index,
                    expected: expected.clone(),
                    found,
                });
            }
            w = w.undo()?;
            let found = w.content_hash();
            if found != self.log[index].before {
                return Err(WorkspaceError::LogIntegrity {
                    index,
                    expected: self.log[index].before.clone(),
                    found,
                });
            }
        }
        Ok(())
    }

    pub fn undo(&self) -> Result<Self, WorkspaceError> {
        let mut w = self.clone();
        let entry = w.log.pop().ok_or(WorkspaceError::NothingToUndo)?;
        if let Some(sig) = entry.prior.signature {
            w.signature = sig;
        }
        for (name, d) in entry.prior.diagrams {
            match d {
                Some(d) => w.diagrams.insert(name, d),
                None => w.diagrams.remove(&name),
            };
        }
        Ok(w)
    }

    /// Builds the successor state from `changes` and records `command`.
    fn commit(&self, command: &str, signature: Option<LabelSignature>, changes: Vec<(String, Diagram)>) -> Self {
        let before = self.content_hash();
        let mut next = self.clone();
        let mut prior = Prior::default();
        if let Some(sig) = signature {
            prior.signature = Some(std::mem::replace(&mut next.signature, sig));
        }
        for (name, d) in changes {
            let old = next.diagrams.insert(name.clone(), d);
            prior.diagrams.entry(name).or_insert(old);
        }
        let after = next.content_hash();
        next.log.push(LogEntry {
            command: command.to_owned(),
            before,
            after,
            prior,
        });
        next
    }

    pub fn add_label(&self, info: LabelInfo, command: &str) -> Result<Self, WorkspaceError> {
        let mut sig = self.signature.clone();
        sig.add(info)?;
        Ok(self.commit(command, Some(sig), Vec::new()))
    }

    /// Applies one script line, returning the successor workspace.
    pub fn apply_line(&self, line: &str, env: &ScriptEnv) -> Result<Self, WorkspaceError> {
        let cmd = parse_command(line)?;
        self.apply(&cmd, &normalize(line), env)
    }

    /// Runs a script; blank lines and `#` comments are skipped.
    pub fn replay(&self, script: &str, env: &ScriptEnv) -> Result<Self, ReplayError> {
        let mut w = self.clone();
        let mut index = 0;
        for (n, raw) in script.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match w.apply_line(line, env) {
                Ok(next) => w = next,
                Err(error) => {
                    return Err(ReplayError {
                        index,
                        line: n + 1,
                        command: line.to_owned(),
                        error,
                        workspace: Box::new(w),
                    })
                }
            }
            index += 1;
        }
        Ok(w)
    }

    /// Replays the logged commands on a fresh copy of the initial state.
    pub fn log_script(&self) -> String {
        self.log.iter().map(|e| format!("{}\n", e.command)).collect()
    }

    /// The state before any logged command.
    pub fn initial(&self) -> Result<Self, WorkspaceError> {
        let mut w = self.clone();
        while !w.log.is_empty() {
            w = w.undo()?;
        }
        Ok(w)
    }
}

pub(crate) fn normalize(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn decode_signature(v: &Value, at: &str) -> Result<LabelSignature, WorkspaceError> {
    let obj = v.as_object().ok_or_else(|| parse_error(at, "expected an object"))?;
    let mut sig = LabelSignature::new();
    for (k, info) in obj {
        let info: LabelInfo = serde_json::from_value(info.clone()).map_err(|e| parse_error(format!("{at}/{k}"), e.to_string()))?;
        if &info.id != k {
            return Err(parse_error(format!("{at}/{k}"), format!("id `{}` does not match its key", info.id)));
        }
        sig.add(info).map_err(|e| parse_error(format!("{at}/{k}"), e.to_string()))?;
    }
    Ok(sig)
}

fn decode_diagrams(
    decoder: &mut Decoder,
    v: &Value,
    at: &str,
    allow_null: bool,
) -> Result<BTreeMap<String, Option<Diagram>>, WorkspaceError> {
    let obj = v.as_object().ok_or_else(|| parse_error(at, "expected an object"))?;
    let mut out = BTreeMap::new();
    for (k, d) in obj {
        let here = format!("{at}/{k}");
        if !valid_name(k) {
            return Err(parse_error(&here, format!("invalid diagram name `{k}`")));
        }
        let d = match d {
            Value::Null if allow_null => None,
            _ => Some(decoder.diagram(d, &here).map_err(|e| parse_error(e.pointer, e.message))?),
        };
        out.insert(k.clone(), d);
    }
    Ok(out)
}
