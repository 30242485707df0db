//! SVG drawing of a planar gasket: the images `T_i(Δ)` of one word length as
//! filled triangles on an equilateral copy of Δ, holes left blank.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ifs::IfsSystem;
use crate::words::{enumerate_words, Execution, PruningPolicy, WordNode, WordVisitor};

pub const MAX_RENDER_DEPTH: usize = 11;
const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#1b4f72", "#1f618d", "#2874a6", "#2e86c1", "#3498db", "#5dade2"];

/// Equilateral corners for `e₁, e₂, e₃`, apex on top.
fn corners() -> [(f64, f64); 3] {
    let side = SIZE - 2.0 * MARGIN;
    let h = side * 3f64.sqrt() / 2.0;
    let top = MARGIN + (side - h) / 2.0;
    [(SIZE / 2.0, top), (MARGIN, top + h), (SIZE - MARGIN, top + h)]
}

fn planar(x: &[f64]) -> (f64, f64) {
    corners().iter().zip(x).fold((0.0, 0.0), |(a, b), (&(cx, cy), &w)| (a + w * cx, b + w * cy))
}

struct Triangles {
    level: usize,
    out: Vec<[(f64, f64); 3]>,
}

impl WordVisitor for Triangles {
    fn visit(&mut self, node: &WordNode<'_>) {
        if node.depth() != self.level {
            return;
        }
        let m = node.matrix;
        let mut tri = [(0.0, 0.0); 3];
        for (c, t) in tri.iter_mut().enumerate() {
            let col: Vec<f64> = (0..3).map(|r| m.get_f64(r, c)).collect();
            let s: f64 = col.iter().sum();
            *t = planar(&col.iter().map(|v| v / s).collect::<Vec<_>>());
        }
        self.out.push(tri);
    }
    fn split(&self) -> Self {
        Self { level: self.level, out: Vec::new() }
    }
    fn merge(&mut self, other: Self) {
        self.out.extend(other.out);
    }
}

pub fn ensure_planar(dimension: usize) -> Result<()> {
    if dimension != 2 {
        return Err(Error::Unsupported("render supports d = 2 only".into()));
    }
    Ok(())
}

/// The `3^{depth+1}` images of words of length `depth + 1`, so depth 0
/// shows the first-level images around the main hole.
pub fn render_svg(system: &IfsSystem, depth: usize) -> Result<String> {
    ensure_planar(system.dimension())?;
    if depth > MAX_RENDER_DEPTH {
        return Err(Error::InvalidArgument(format!("render depth {depth} exceeds {MAX_RENDER_DEPTH}")));
    }
    let level = depth + 1;
    let mut v = Triangles { level, out: Vec::new() };
    enumerate_words(system.generators(), PruningPolicy::MaxDepth(level), &mut v, Execution::Sequential)?;
    let fill = PALETTE[depth % PALETTE.len()];
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "<title>{} level {level}</title>", system.name());
    let [a, b, c] = corners();
    let _ = writeln!(
        svg,
        r#"<polygon points="{:.4},{:.4} {:.4},{:.4} {:.4},{:.4}" fill="white" stroke="black" stroke-width="1"/>"#,
        a.0, a.1, b.0, b.1, c.0, c.1
    );
    let _ = writeln!(svg, r#"<g fill="{fill}" stroke="none">"#);
    for t in &v.out {
        let _ = writeln!(
            svg,
            r#"<polygon points="{:.4},{:.4} {:.4},{:.4} {:.4},{:.4}"/>"#,
            t[0].0, t[0].1, t[1].0, t[1].1, t[2].0, t[2].1
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
