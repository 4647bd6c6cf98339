//! The line-oriented proof script language.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{normalize, valid_name, Decoder, Workspace, WorkspaceError};
use crate::catcore::LabelInfo;
use crate::diagram::{beside, concat, cone_generator, identity_suspend, slice, validate, Diagram, Path};
use crate::fixtures::bubble;
use crate::homotopy::{
    contract_at, contraction_step, expand_at, expansion_step, ContractionDirective, ExpansionDirective, First, Policy,
};
use crate::monotone::Bias;
use crate::render::{emit_svg, project, Style};

/// Where relative file arguments are resolved.
#[derive(Debug, Clone, Default)]
pub struct ScriptEnv {
    pub base_dir: PathBuf,
}

impl ScriptEnv {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        ScriptEnv { base_dir: base_dir.into() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "script", no_binary_name = true, disable_help_subcommand = true)]
struct Line {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Signature(SignatureCommand),
    #[command(subcommand)]
    Diagram(DiagramCommand),
    Contract(ContractArgs),
    Expand(ExpandArgs),
    #[command(subcommand)]
    Assert(AssertCommand),
    Render(RenderArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum SignatureCommand {
    /// Declares a label.
    Add {
        id: String,
        dim: usize,
        name: Option<String>,
        color: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum DiagramCommand {
    /// Reads an encoded diagram from a JSON file.
    Literal { name: String, file: PathBuf },
    /// The generator `label : source -> target`; a source or target that is
    /// not a diagram name is read as a label.
    Cone {
        name: String,
        label: String,
        source: String,
        target: String,
    },
    Concat { name: String, a: String, b: String },
    Suspend { name: String, a: String },
    /// Places `b` to the right of `a` at every height.
    Beside { name: String, a: String, b: String },
    /// The cospan `a -> a <- a` with identity legs.
    Bubble { name: String, a: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct ContractArgs {
    pub name: String,
    #[arg(long, default_value = "-")]
    pub path: Path,
    #[arg(long, value_parser = parse_window)]
    pub window: (usize, usize),
    #[arg(long, default_value = "none")]
    pub bias: Bias,
    /// Appends the move to the named proof diagram.
    #[arg(long)]
    pub proof: Option<String>,
    /// Accepts results that fail the dimension check.
    #[arg(long)]
    pub permissive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct ExpandArgs {
    pub name: String,
    #[arg(long, default_value = "-")]
    pub path: Path,
    #[arg(long)]
    pub height: usize,
    #[arg(long, value_parser = parse_split)]
    pub split: (Vec<usize>, Vec<usize>),
    #[arg(long, default_value = "lower")]
    pub first: First,
    #[arg(long)]
    pub proof: Option<String>,
    #[arg(long)]
    pub permissive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum AssertCommand {
    Length { name: String, k: usize },
    /// Succeeds if the inner command fails; the workspace is unchanged.
    Fails {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        command: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct RenderArgs {
    pub name: String,
    #[arg(long, default_value = "-")]
    pub slice: Path,
    #[arg(long)]
    pub out: PathBuf,
}

impl ContractArgs {
    pub fn directive(&self) -> ContractionDirective {
        ContractionDirective {
            path: self.path.clone(),
            window: self.window,
            bias: self.bias,
        }
    }
}

impl ExpandArgs {
    pub fn directive(&self) -> ExpansionDirective {
        ExpansionDirective {
            path: self.path.clone(),
            height: self.height,
            split: self.split.clone(),
            first: self.first,
        }
    }
}

fn policy(permissive: bool) -> Policy {
    if permissive {
        Policy::Permissive
    } else {
        Policy::Strict
    }
}

/// `a..b`
pub fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad height `{x}`"));
    Ok((parse(a)?, parse(b)?))
}

/// `1,2/0`; either side may be empty.
pub fn parse_split(s: &str) -> Result<(Vec<usize>, Vec<usize>), String> {
    let (a, b) = s.split_once('/').ok_or_else(|| format!("expected <csv>/<csv>, got `{s}`"))?;
    let group = |x: &str| -> Result<Vec<usize>, String> {
        x.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| format!("bad height `{t}`")))
            .collect()
    };
    Ok((group(a)?, group(b)?))
}

pub fn parse_command(line: &str) -> Result<Command, WorkspaceError> {
    parse_tokens(line.split_whitespace())
}

fn parse_tokens<I: IntoIterator<Item = T>, T: Into<std::ffi::OsString> + Clone>(tokens: I) -> Result<Command, WorkspaceError> {
    Line::try_parse_from(tokens).map(|l| l.command).map_err(|e| {
        let text = e.to_string();
        WorkspaceError::Command(text.lines().next().unwrap_or("").trim_start_matches("error: ").to_owned())
    })
}

fn path_arg(p: &Path) -> String {
    if p.is_empty() {
        "-".to_owned()
    } else {
        p.to_string()
    }
}

fn proof_arg(proof: Option<&str>) -> String {
    proof.map(|p| format!(" --proof {p}")).unwrap_or_default()
}

/// The script line equivalent to a contraction directive.
pub fn contract_command(name: &str, dir: &ContractionDirective, proof: Option<&str>) -> String {
    let bias = match dir.bias {
        Bias::None => String::new(),
        Bias::Lower => " --bias lower".to_owned(),
        Bias::Higher => " --bias higher".to_owned(),
    };
    format!(
        "contract {name} --path {} --window {}..{}{bias}{}",
        path_arg(&dir.path),
        dir.window.0,
        dir.window.1,
        proof_arg(proof)
    )
}

/// The script line equivalent to an expansion directive.
pub fn expand_command(name: &str, dir: &ExpansionDirective, proof: Option<&str>) -> String {
    let csv = |g: &[usize]| g.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let first = match dir.first {
        First::Lower => "lower",
        First::Higher => "higher",
    };
    format!(
        "expand {name} --path {} --height {} --split {}/{} --first {first}{}",
        path_arg(&dir.path),
        dir.height,
        csv(&dir.split.0),
        csv(&dir.split.1),
        proof_arg(proof)
    )
}

impl Workspace {
    /// A diagram by name, or a label of the signature as a 0-diagram.
    fn operand(&self, name: &str) -> Result<Diagram, WorkspaceError> {
        match self.diagrams.get(name) {
            Some(d) => Ok(d.clone()),
            None if self.signature.get(name).is_some() => Ok(Diagram::label(name)),
            None => Err(WorkspaceError::UnknownDiagram(name.to_owned())),
        }
    }

    fn fresh(&self, name: &str) -> Result<(), WorkspaceError> {
        if !valid_name(name) {
            return Err(WorkspaceError::InvalidName(name.to_owned()));
        }
        if self.diagrams.contains_key(name) {
            return Err(WorkspaceError::DiagramExists(name.to_owned()));
        }
        Ok(())
    }

    /// `proof` extended by one step, or the step itself for a new proof.
    fn extend_proof(&self, proof: &str, step: Diagram) -> Result<Diagram, WorkspaceError> {
        if !valid_name(proof) {
            return Err(WorkspaceError::InvalidName(proof.to_owned()));
        }
        match self.diagrams.get(proof) {
            Some(p) => Ok(concat(p, &step)?),
            None => Ok(step),
        }
    }

    fn move_changes(&self, name: &str, result: Diagram, proof: Option<&str>, step: Diagram) -> Result<Vec<(String, Diagram)>, WorkspaceError> {
        let mut changes = vec![(name.to_owned(), result)];
        if let Some(p) = proof {
            if p == name {
                return Err(WorkspaceError::InvalidName(p.to_owned()));
            }
            changes.push((p.to_owned(), self.extend_proof(p, step)?));
        }
        Ok(changes)
    }

    pub fn contract(&self, args: &ContractArgs) -> Result<Self, WorkspaceError> {
        let d = self.get(&args.name)?;
        let c = contract_at(&self.signature, d, &args.directive(), policy(args.permissive))?;
        let changes = self.move_changes(&args.name, c.result, args.proof.as_deref(), contraction_step(&c.map))?;
        let text = contract_command(&args.name, &args.directive(), args.proof.as_deref());
        Ok(self.commit(&text, None, changes))
    }

    pub fn expand(&self, args: &ExpandArgs) -> Result<Self, WorkspaceError> {
        let d = self.get(&args.name)?;
        let e = expand_at(&self.signature, d, &args.directive(), policy(args.permissive))?;
        let changes = self.move_changes(&args.name, e.result, args.proof.as_deref(), expansion_step(&e.map))?;
        let text = expand_command(&args.name, &args.directive(), args.proof.as_deref());
        Ok(self.commit(&text, None, changes))
    }

    pub fn apply(&self, cmd: &Command, text: &str, env: &ScriptEnv) -> Result<Self, WorkspaceError> {
        match cmd {
            Command::Signature(SignatureCommand::Add { id, dim, name, color }) => self.add_label(
                LabelInfo {
                    id: id.clone(),
                    name: name.clone().unwrap_or_else(|| id.clone()),
                    dim: *dim,
                    color: color.clone(),
                },
                text,
            ),
            Command::Diagram(c) => {
                let (name, d) = match c {
                    DiagramCommand::Literal { name, file } => (name, self.read_literal(&env.base_dir.join(file))?),
                    DiagramCommand::Cone {
                        name,
                        label,
                        source,
                        target,
                    } => (name, cone_generator(&self.signature, label, &self.operand(source)?, &self.operand(target)?)?),
                    DiagramCommand::Concat { name, a, b } => (name, concat(&self.operand(a)?, &self.operand(b)?)?),
                    DiagramCommand::Suspend { name, a } => (name, identity_suspend(&self.operand(a)?)),
                    DiagramCommand::Beside { name, a, b } => (name, beside(&self.operand(a)?, &self.operand(b)?)?),
                    DiagramCommand::Bubble { name, a } => (name, bubble(&self.operand(a)?)),
                };
                self.fresh(name)?;
                validate(&self.signature, &d).map_err(|violations| WorkspaceError::ValidationFailed {
                    name: name.clone(),
                    violations,
                })?;
                Ok(self.commit(text, None, vec![(name.clone(), d)]))
            }
            Command::Contract(args) => self.contract(args),
            Command::Expand(args) => self.expand(args),
            Command::Assert(AssertCommand::Length { name, k }) => {
                let len = self.get(name)?.len();
                if len == *k {
                    Ok(self.clone())
                } else {
                    Err(WorkspaceError::AssertionFailed(format!("`{name}` has length {len}, expected {k}")))
                }
            }
            Command::Assert(AssertCommand::Fails { command }) => {
                let inner = parse_tokens(command.iter().cloned())?;
                let inner_text = normalize(&command.join(" "));
                match self.apply(&inner, &inner_text, env) {
                    Ok(_) => Err(WorkspaceError::AssertionFailed(format!("`{inner_text}` succeeded"))),
                    Err(_) => Ok(self.clone()),
                }
            }
            Command::Render(args) => {
                let d = slice(self.get(&args.name)?, &args.slice)?;
                let svg = emit_svg(&self.signature, &project(&self.signature, &d), &Style::default());
                let out = env.base_dir.join(&args.out);
                std::fs::write(&out, svg).map_err(|e| WorkspaceError::Io(format!("{}: {e}", out.display())))?;
                Ok(self.clone())
            }
        }
    }

    fn read_literal(&self, file: &std::path::Path) -> Result<Diagram, WorkspaceError> {
        let text = std::fs::read(file).map_err(|e| WorkspaceError::Io(format!("{}: {e}", file.display())))?;
        let v: serde_json::Value = serde_json::from_slice(&text).map_err(|e| WorkspaceError::Parse {
            location: format!("{} line {} column {}", file.display(), e.line(), e.column()),
            message: e.to_string(),
        })?;
        Decoder::new().diagram(&v, "").map_err(|e| WorkspaceError::Parse {
            location: format!("{} {}", file.display(), e.pointer),
            message: e.message,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::workspace::tests::fixture_workspace;

    #[test]
    fn parsing() {
        assert_eq!(parse_window("0..2"), Ok((0, 2)));
        assert!(parse_window("2").is_err());
        assert_eq!(parse_split("1,2/0"), Ok((vec![1, 2], vec![0])));
        assert_eq!(parse_split("/0"), Ok((vec![], vec![0])));
        let c = parse_command("contract N --path s0,r1 --window 1..3 --bias higher").unwrap();
        match c {
            Command::Contract(a) => {
                assert_eq!(a.path.to_string(), "s0,r1");
                assert_eq!((a.window, a.bias, a.proof), ((1, 3), Bias::Higher, None));
            }
            other => panic!("{other:?}"),
        }
        let e = parse_command("contract N --window 1").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(parse_command("frobnicate").is_err());
    }

    #[test]
    fn directive_commands_round_trip() {
        let dir = ContractionDirective {
            path: "s1".parse().unwrap(),
            window: (0, 2),
            bias: Bias::Lower,
        };
        let line = contract_command("D", &dir, Some("P"));
        assert_eq!(line, "contract D --path s1 --window 0..2 --bias lower --proof P");
        match parse_command(&line).unwrap() {
            Command::Contract(a) => assert_eq!(a.directive(), dir),
            other => panic!("{other:?}"),
        }
        let dir = ExpansionDirective {
            path: Path::root(),
            height: 0,
            split: (vec![1], vec![0]),
            first: First::Higher,
        };
        let line = expand_command("D", &dir, None);
        assert_eq!(line, "expand D --path - --height 0 --split 1/0 --first higher");
        match parse_command(&line).unwrap() {
            Command::Expand(a) => assert_eq!(a.directive(), dir),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn replay_stops_at_failure() {
        let env = ScriptEnv::default();
        let script = "signature add x 0\n# a comment\n\nsignature add w 1\ndiagram cone wire w x x\ncontract wire --path s5 --window 0..1\nsignature add v 2\n";
        let e = Workspace::new().replay(script, &env).unwrap_err();
        assert_eq!((e.index, e.line), (3, 6));
        assert!(matches!(e.error, WorkspaceError::Homotopy(_)));
        assert_eq!(e.workspace.log.len(), 3);
        assert!(Workspace::new().replay("", &env).unwrap() == Workspace::new());
    }

    #[test]
    fn assertions() {
        let env = ScriptEnv::default();
        let w = fixture_workspace(&fixtures::opposing_unit_counit());
        let w2 = w
            .replay(
                "assert length opposing 2\nassert fails contract opposing --path - --window 0..2\n",
                &env,
            )
            .unwrap();
        assert_eq!(w2, w);
        let e = w.replay("assert fails assert length opposing 2\n", &env).unwrap_err();
        assert!(matches!(e.error, WorkspaceError::AssertionFailed(_)));
        let e = w.replay("assert length opposing 3\n", &env).unwrap_err();
        assert!(matches!(e.error, WorkspaceError::AssertionFailed(_)));
    }

    #[test]
    fn moves_with_proof() {
        let env = ScriptEnv::default();
        let w = fixture_workspace(&fixtures::two_beads());
        let w = w
            .replay(
                "contract staggered --path - --window 0..2 --proof P\nassert length staggered 1\nassert length P 1\n",
                &env,
            )
            .unwrap();
        assert_eq!(w.get("staggered").unwrap(), fixtures::two_beads().get("contracted"));
        let w = w.apply_line("expand staggered --height 0 --split 0/1 --proof P", &env).unwrap();
        assert_eq!(w.get("P").unwrap().len(), 2);
        assert_eq!(w.get("staggered").unwrap().len(), 2);
        w.verify_log().unwrap();
        let again = w.initial().unwrap().replay(&w.log_script(), &env).unwrap();
        assert_eq!(again, w);
    }

    #[test]
    fn literal_and_render_files() {
        let dir = tempfile::tempdir().unwrap();
        let f = fixtures::two_beads();
        let encoded = crate::workspace::encode_diagram(f.get("contracted"));
        std::fs::write(dir.path().join("c.json"), encoded.to_string()).unwrap();
        let env = ScriptEnv::new(dir.path());
        let w = Workspace {
            signature: f.signature.clone(),
            ..Workspace::default()
        };
        let w = w
            .replay("diagram literal c c.json\nrender c --slice - --out c.svg\nrender c --slice s0 --out s0.svg\n", &env)
            .unwrap();
        assert_eq!(w.get("c").unwrap(), f.get("contracted"));
        assert!(std::fs::read_to_string(dir.path().join("c.svg")).unwrap().contains("<circle"));
        std::fs::write(dir.path().join("bad.json"), "{\"regulars\": 3}").unwrap();
        let e = w.apply_line("diagram literal d bad.json", &env).unwrap_err();
        assert!(matches!(e, WorkspaceError::Parse { .. }));
        assert!(matches!(w.apply_line("diagram literal c c.json", &env), Err(WorkspaceError::DiagramExists(_))));
    }
}
