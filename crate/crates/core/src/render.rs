//! Projection of a diagram onto its two outermost dimensions, emitted as SVG
//! or as a plain-text listing.

use std::fmt::Write as _;

use serde::Serialize;

use crate::catcore::LabelSignature;
use crate::diagram::{Diagram, Morphism};
use crate::zigzag::Height;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClass {
    Vertex,
    Wire,
    Region,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    /// Outer height, in interleaved order.
    pub row: usize,
    /// Inner height, in interleaved order.
    pub column: usize,
    pub label: String,
    pub class: NodeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

/// Nodes for every (outer, inner) height pair; edges join the singular
/// inner heights of adjacent rows along the forward and backward monotones.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LayerGraph {
    pub dimension: usize,
    /// Number of inner heights of each row.
    pub rows: Vec<usize>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Forward/backward monotone between rows, keyed by the regular row.
    pub monotones: Vec<(usize, usize, Vec<usize>)>,
}

impl LayerGraph {
    /// Nodes are stored row by row.
    pub fn node_index(&self, row: usize, column: usize) -> Option<usize> {
        let width = *self.rows.get(row)?;
        (column < width).then(|| self.rows[..row].iter().sum::<usize>() + column)
    }

    pub fn count(&self, class: NodeClass) -> usize {
        self.nodes.iter().filter(|n| n.class == class).count()
    }
}

/// The representative label of a diagram: the label of highest dimension
/// met at its singular heights (the first one on ties).
pub fn principal_label<'a>(sig: &LabelSignature, d: &'a Diagram) -> &'a str {
    match d {
        Diagram::Label(l) => l,
        Diagram::Zigzag(z) => {
            let mut best = principal_label(sig, z.regular(0));
            let mut best_dim = sig.dim(best).unwrap_or(0);
            for s in z.singulars() {
                let l = principal_label(sig, s);
                let dim = sig.dim(l).unwrap_or(0);
                if dim > best_dim {
                    best = l;
                    best_dim = dim;
                }
            }
            best
        }
    }
}

fn classify(sig: &LabelSignature, label: &str, n: usize) -> NodeClass {
    let dim = sig.dim(label).unwrap_or(0);
    if dim >= n {
        NodeClass::Vertex
    } else if dim + 1 == n {
        NodeClass::Wire
    } else {
        NodeClass::Region
    }
}

fn row_cells(d: &Diagram) -> Vec<&Diagram> {
    match d {
        Diagram::Label(_) => vec![d],
        Diagram::Zigzag(z) => (0..2 * z.len() + 1)
            .map(|k| match Height::from_interleaved(k) {
                Height::Regular(i) => z.regular(i),
                Height::Singular(i) => z.singular(i),
            })
            .collect(),
    }
}

fn sing_values(m: &Morphism) -> Vec<usize> {
    m.as_map().map(|m| m.sing().values().to_vec()).unwrap_or_default()
}

/// Projects `d` onto its two outermost dimensions. A 1-diagram becomes a
/// single row and a 0-diagram a single node.
pub fn project(sig: &LabelSignature, d: &Diagram) -> LayerGraph {
    let n = d.dimension();
    let mut g = LayerGraph {
        dimension: n,
        ..LayerGraph::default()
    };
    let rows: Vec<&Diagram> = if n >= 2 { row_cells(d) } else { vec![d] };
    for (row, r) in rows.iter().enumerate() {
        let cells = row_cells(r);
        g.rows.push(cells.len());
        for (column, c) in cells.into_iter().enumerate() {
            let label = principal_label(sig, c).to_owned();
            let class = classify(sig, &label, n);
            g.nodes.push(Node { row, column, label, class });
        }
    }
    if let (Diagram::Zigzag(z), true) = (d, n >= 2) {
        for i in 0..z.len() {
            let (r_lo, s, r_hi) = (2 * i, 2 * i + 1, 2 * i + 2);
            for (r, m) in [(r_lo, z.forward(i)), (r_hi, z.backward(i))] {
                let values = sing_values(m);
                for (a, &b) in values.iter().enumerate() {
                    let from = g.node_index(r, 2 * a + 1).expect("row cell");
                    let to = g.node_index(s, 2 * b + 1).expect("row cell");
                    g.edges.push(Edge { from, to });
                }
                g.monotones.push((r, s, values));
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub unit: f64,
    pub margin: f64,
    pub vertex_radius: f64,
    pub stroke_width: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            unit: 40.0,
            margin: 20.0,
            vertex_radius: 6.0,
            stroke_width: 3.0,
        }
    }
}

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f"];

fn color<'a>(sig: &'a LabelSignature, label: &str) -> &'a str {
    match sig.get(label).and_then(|l| l.color.as_deref()) {
        Some(c) => c,
        None => {
            let index = sig.labels().position(|l| l.id == label).unwrap_or(0);
            PALETTE[index % PALETTE.len()]
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Deterministic SVG 1.1 document; `x` is the inner height and `y` the
/// outer height, the lowest row drawn at the bottom.
pub fn emit_svg(sig: &LabelSignature, g: &LayerGraph, style: &Style) -> String {
    let columns = g.rows.iter().copied().max().unwrap_or(0);
    let row_count = g.rows.len();
    let width = style.margin * 2.0 + style.unit * columns.saturating_sub(1) as f64;
    let height = style.margin * 2.0 + style.unit * row_count.saturating_sub(1) as f64;
    let pos = |n: &Node| {
        let x = style.margin + style.unit * n.column as f64;
        let y = style.margin + style.unit * (row_count - 1 - n.row) as f64;
        (x, y)
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let half = style.unit / 2.0;
    for n in g.nodes.iter().filter(|n| n.class == NodeClass::Region) {
        let (x, y) = pos(n);
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" fill-opacity="0.15"><title>{}</title></rect>"#,
            x - half,
            y - half,
            style.unit,
            style.unit,
            color(sig, &n.label),
            escape(&n.label)
        );
    }
    for e in &g.edges {
        let (a, b) = (&g.nodes[e.from], &g.nodes[e.to]);
        let ((x1, y1), (x2, y2)) = (pos(a), pos(b));
        let wire = if a.class == NodeClass::Wire { a } else { b };
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="{}"/>"#,
            color(sig, &wire.label),
            style.stroke_width
        );
    }
    for n in g.nodes.iter().filter(|n| n.class == NodeClass::Vertex) {
        let (x, y) = pos(n);
        let _ = writeln!(
            out,
            r#"<circle cx="{x}" cy="{y}" r="{}" fill="{}"><title>{}</title></circle>"#,
            style.vertex_radius,
            color(sig, &n.label),
            escape(&n.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One line per row, highest first, listing the singular entities of the
/// row and its ordinal `[k]`; monotones are listed between rows.
pub fn emit_text(g: &LayerGraph) -> String {
    let mut out = String::new();
    for row in (0..g.rows.len()).rev() {
        let entities: Vec<&str> = g
            .nodes
            .iter()
            .filter(|n| n.row == row && (n.column % 2 == 1 || g.rows[row] == 1))
            .map(|n| n.label.as_str())
            .collect();
        let count = g.rows[row] / 2;
        let name = if g.dimension >= 2 {
            match Height::from_interleaved(row) {
                Height::Regular(i) => format!("r{i}"),
                Height::Singular(i) => format!("s{i}"),
            }
        } else {
            "-".to_owned()
        };
        let _ = writeln!(out, "{name:<4}{:<32}[{count}]", entities.join(" "));
        if row > 0 {
            let below = row - 1;
            let (from, to) = if row % 2 == 0 { (row, below) } else { (below, row) };
            if let Some((_, _, values)) = g.monotones.iter().find(|(r, s, _)| *r == from && *s == to) {
                let name = if row % 2 == 0 { format!("b{}", below / 2) } else { format!("f{}", below / 2) };
                let values: Vec<String> = values.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "    {name} = ({})", values.join(","));
            }
        }
    }
    out
}
