use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use zigzag::catcore::oracle::{delta_universe_bound, search_delta_colimit, verify_delta};
use zigzag::catcore::{Category, Simplex};
use zigzag::diagram::{slice, Path};
use zigzag::homotopy::{window_delta, ContractionDirective};
use zigzag::monotone::{biased_cocone, Bias, DeltaDiagram, Monotone};
use zigzag::render::{emit_svg, emit_text, project, Style};
use zigzag::service::{self, Store};
use zigzag::workspace::{encode_diagram, parse_window, ContractArgs, ExpandArgs, ScriptEnv, Workspace, WorkspaceError};

/// Contraction and expansion of associative n-diagrams.
#[derive(Debug, Parser)]
#[command(name = "zigzag", version)]
struct Cli {
    /// Workspace file.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Listen address for `serve`.
    #[arg(long, global = true, default_value = "127.0.0.1:8080")]
    serve_addr: String,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Checks the file, every diagram and the log hashes.
    Validate,
    /// Runs a proof script against the workspace (created if missing).
    Replay {
        script: PathBuf,
        /// Write the result here instead of back to the workspace.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start from an empty workspace.
        #[arg(long)]
        fresh: bool,
    },
    Contract(ContractArgs),
    Expand(ExpandArgs),
    /// Reverts the last logged command.
    Undo,
    /// Prints the log as a replayable script.
    Log,
    /// Prints the slice of a diagram at a path.
    Slice {
        name: String,
        #[arg(long, default_value = "-")]
        path: Path,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Renders a slice; to stdout without `--out`.
    Render {
        name: String,
        #[arg(long, default_value = "-")]
        slice: Path,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
    /// Checks the singular-height step of a contraction against a brute-force
    /// search for universal cocones.
    OracleCheck {
        name: String,
        #[arg(long, default_value = "-")]
        path: Path,
        #[arg(long, value_parser = parse_window)]
        window: (usize, usize),
        #[arg(long, default_value = "none")]
        bias: Bias,
        /// Largest apex enumerated (default: total size + 1).
        #[arg(long)]
        max_apex: Option<usize>,
    },
    /// Serves the HTTP API.
    Serve {
        /// Directory for workspaces created over HTTP.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Svg,
    Graph,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<WorkspaceError> for Failure {
    fn from(e: WorkspaceError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn io(path: &FsPath, e: std::io::Error) -> Failure {
    WorkspaceError::Io(format!("{}: {e}", path.display())).into()
}

fn workspace_path(cli: &Cli) -> Result<&FsPath, Failure> {
    cli.workspace.as_deref().ok_or_else(|| Failure {
        code: 2,
        message: "--workspace is required".into(),
    })
}

fn load(path: &FsPath) -> Result<Workspace, Failure> {
    let bytes = std::fs::read(path).map_err(|e| io(path, e))?;
    Ok(Workspace::load(&bytes)?)
}

fn store(path: &FsPath, w: &Workspace) -> Result<(), Failure> {
    std::fs::write(path, w.save()).map_err(|e| io(path, e))
}

fn render(w: &Workspace, name: &str, path: &Path, format: Format) -> Result<String, Failure> {
    let d = slice(w.get(name)?, path).map_err(WorkspaceError::from)?;
    let g = project(&w.signature, &d);
    Ok(match format {
        Format::Text => emit_text(&g),
        Format::Svg => emit_svg(&w.signature, &g, &Style::default()),
        Format::Graph => serde_json::to_string_pretty(&g).expect("serializable") + "\n",
        Format::Json => serde_json::to_string(&encode_diagram(&d)).expect("serializable") + "\n",
    })
}

fn legs(legs: &[Monotone]) -> String {
    let parts: Vec<String> = legs
        .iter()
        .map(|l| format!("({})", l.values().iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    parts.join(" ")
}

fn oracle_check(w: &Workspace, name: &str, dir: &ContractionDirective, max_apex: Option<usize>) -> Result<(), Failure> {
    let d = w.get(name)?;
    let Some(delta) = window_delta(d, dir).map_err(WorkspaceError::from)? else {
        println!("window holds labels: the colimit is taken in the label poset");
        return Ok(());
    };
    let bound = max_apex.unwrap_or_else(|| delta_universe_bound(&delta));
    println!("sizes {:?}, arrows {}", delta.objects, legs(&delta.arrows));
    let library = Simplex.connected_colimit(&delta);
    let oracle = search_delta_colimit(&delta, bound);
    match &library {
        Ok(c) => println!("library: colimit [{}], legs {}", c.apex, legs(&c.legs)),
        Err(e) => println!("library: no colimit ({})", e.reason()),
    }
    match &oracle {
        Some(c) => println!("oracle: universal cocone [{}], legs {} (apex <= {bound})", c.apex, legs(&c.legs)),
        None => println!("oracle: no universal cocone with apex <= {bound}"),
    }
    if dir.bias != Bias::None {
        let dd = DeltaDiagram::new(delta.shape.clone(), delta.objects.clone(), delta.arrows.clone()).expect("built from a valid zigzag");
        if let Ok(c) = biased_cocone(&dd, dir.bias) {
            println!("biased cocone [{}], legs {}", c.size, legs(&c.legs));
        }
    }
    let agree = match (&library, &oracle) {
        (Ok(c), Some(o)) => c == o && verify_delta(&delta, c, bound),
        (Err(_), None) => true,
        _ => false,
    };
    if agree {
        println!("agree");
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "library and oracle disagree".into(),
        })
    }
}

fn serve(cli: &Cli, data_dir: Option<&FsPath>) -> Result<(), Failure> {
    let store = match data_dir {
        Some(dir) => Store::open(dir)?,
        None => Store::in_memory(),
    };
    if let Some(file) = &cli.workspace {
        let id = file.file_stem().and_then(|s| s.to_str()).unwrap_or("workspace");
        store.attach(id, file)?;
        eprintln!("serving {} as /workspaces/{id}", file.display());
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    eprintln!("listening on {}", cli.serve_addr);
    runtime.block_on(service::serve(&cli.serve_addr, Arc::new(store))).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", cli.serve_addr),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Cmd::Validate => {
            let w = load(workspace_path(cli)?)?;
            w.verify_log()?;
            println!("ok {}", w.content_hash());
            println!("{} labels, {} diagrams, {} log entries", w.signature.labels().count(), w.diagrams.len(), w.log.len());
            for (name, d) in &w.diagrams {
                println!("  {name}: dimension {}, length {}", d.dimension(), d.len());
            }
            Ok(())
        }
        Cmd::Replay { script, out, fresh } => {
            let path = workspace_path(cli)?;
            let w = if *fresh || !path.exists() { Workspace::new() } else { load(path)? };
            let text = std::fs::read_to_string(script).map_err(|e| io(script, e))?;
            let env = ScriptEnv::new(script.parent().unwrap_or(FsPath::new(".")));
            let target = out.as_deref().unwrap_or(path);
            match w.replay(&text, &env) {
                Ok(w) => {
                    store(target, &w)?;
                    println!("{}", w.content_hash());
                    Ok(())
                }
                Err(e) => {
                    store(target, &e.workspace)?;
                    Err(Failure {
                        code: e.error.exit_code() as u8,
                        message: format!("command {} (line {}) `{}`: {}", e.index, e.line, e.command, e.error),
                    })
                }
            }
        }
        Cmd::Contract(args) => {
            let path = workspace_path(cli)?;
            let w = load(path)?.contract(args)?;
            store(path, &w)?;
            println!("{}", w.content_hash());
            Ok(())
        }
        Cmd::Expand(args) => {
            let path = workspace_path(cli)?;
            let w = load(path)?.expand(args)?;
            store(path, &w)?;
            println!("{}", w.content_hash());
            Ok(())
        }
        Cmd::Undo => {
            let path = workspace_path(cli)?;
            let w = load(path)?.undo()?;
            store(path, &w)?;
            println!("{}", w.content_hash());
            Ok(())
        }
        Cmd::Log => {
            print!("{}", load(workspace_path(cli)?)?.log_script());
            Ok(())
        }
        Cmd::Slice { name, path, format } => {
            print!("{}", render(&load(workspace_path(cli)?)?, name, path, *format)?);
            Ok(())
        }
        Cmd::Render { name, slice, out, format } => {
            let text = render(&load(workspace_path(cli)?)?, name, slice, *format)?;
            match out {
                Some(out) => std::fs::write(out, text).map_err(|e| io(out, e)),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Cmd::OracleCheck {
            name,
            path,
            window,
            bias,
            max_apex,
        } => {
            let dir = ContractionDirective {
                path: path.clone(),
                window: *window,
                bias: *bias,
            };
            oracle_check(&load(workspace_path(cli)?)?, name, &dir, *max_apex)
        }
        Cmd::Serve { data_dir } => serve(cli, data_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
