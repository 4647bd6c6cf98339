//! Checked-in data files: fixture workspaces, the naturality literal and
//! script, and rendered snapshots. `UPDATE_GOLDEN=1` rewrites them.

use std::path::{Path, PathBuf};

use zigzag::diagram::{slice, Diagram, Path as SlicePath};
use zigzag::fixtures::{self, Fixture};
use zigzag::render::{emit_svg, emit_text, project, Style};
use zigzag::workspace::{encode_diagram, Workspace};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn fixtures() -> Vec<(&'static str, Fixture)> {
    vec![
        ("two_beads", fixtures::two_beads()),
        ("opposing", fixtures::opposing_unit_counit()),
        ("between", fixtures::wire_between_vertices()),
        ("scaffold", fixtures::typed_scaffold()),
        ("naturality", fixtures::naturality()),
    ]
}

pub fn workspace(f: &Fixture) -> Workspace {
    Workspace {
        signature: f.signature.clone(),
        diagrams: f.diagrams.iter().cloned().collect(),
        log: Vec::new(),
    }
}

/// The root and every top-level singular height.
pub fn snapshot_paths(d: &Diagram) -> Vec<SlicePath> {
    let mut out = vec![SlicePath::root()];
    out.extend((0..d.len()).map(|i| format!("s{i}").parse().expect("path")));
    out
}

fn path_tag(p: &SlicePath) -> String {
    if p.is_empty() {
        "root".to_owned()
    } else {
        p.to_string().replace(',', "-")
    }
}

/// Every expected file with its contents.
pub fn expected_files() -> Vec<(PathBuf, Vec<u8>)> {
    let dir = data_dir();
    let mut out = Vec::new();
    for (tag, f) in fixtures() {
        out.push((dir.join("workspaces").join(format!("{tag}.json")), workspace(&f).save()));
        for (name, d) in &f.diagrams {
            for p in snapshot_paths(d) {
                let s = slice(d, &p).expect("in range");
                let g = project(&f.signature, &s);
                let stem = format!("{tag}-{name}-{}", path_tag(&p)).replace('\'', "_");
                out.push((dir.join("svg").join(format!("{stem}.svg")), emit_svg(&f.signature, &g, &Style::default()).into_bytes()));
                out.push((dir.join("text").join(format!("{stem}.txt")), emit_text(&g).into_bytes()));
            }
        }
    }
    let n1 = fixtures::naturality();
    let literal = serde_json::to_vec(&encode_diagram(n1.get("N1"))).expect("json");
    out.push((dir.join("N1.json"), literal));
    out
}

/// Paths whose contents differ from the expectation (after rewriting them
/// when `UPDATE_GOLDEN` is set).
pub fn check_files() -> Vec<PathBuf> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (path, contents) in expected_files() {
        if update {
            std::fs::create_dir_all(path.parent().expect("parent")).expect("mkdir");
            std::fs::write(&path, &contents).expect("write");
        } else if std::fs::read(&path).ok().as_deref() != Some(&contents[..]) {
            bad.push(path);
        }
    }
    bad
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
