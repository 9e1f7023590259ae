//! SVG pictures of generating templates.

use std::collections::BTreeSet;
use std::fmt::Write;

use sponge::error::{Error, Result};
use sponge::model::SpongeTemplate;

pub const DEFAULT_SIZE: u32 = 600;
const PANEL_GAP: f64 = 20.0;

fn px(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// One unit-square panel showing the projection of every digit box onto `(cx, cy)`.
fn panel(out: &mut String, t: &SpongeTemplate, cx: usize, cy: usize, left: f64, size: f64) {
    let to_x = |u: f64| left + u * size;
    let to_y = |v: f64| (1.0 - v) * size;
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="0" width="{}" height="{}" fill="white" stroke="black" stroke-width="1"/>"#,
        px(left),
        px(size),
        px(size)
    );
    let mut lines = String::new();
    if let Some(m) = t.bases()[cx].grid {
        for a in 1..m {
            let x = px(to_x(a as f64 / m as f64));
            let _ = writeln!(lines, r#"<line x1="{x}" y1="0" x2="{x}" y2="{}"/>"#, px(size));
        }
    }
    if let Some(n) = t.bases()[cy].grid {
        for b in 1..n {
            let y = px(to_y(b as f64 / n as f64));
            let _ = writeln!(lines, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#, px(left), px(left + size));
        }
    }
    if !lines.is_empty() {
        let _ = write!(out, "<g stroke=\"#c0c0c0\" stroke-width=\"1\">\n{lines}</g>\n");
    }
    let cells: BTreeSet<(usize, usize)> = t.digits().iter().map(|a| (a[cx], a[cy])).collect();
    out.push_str("<g fill=\"#808080\" stroke=\"black\" stroke-width=\"1\">\n");
    for (lx, ly) in cells {
        let ix = t.bases()[cx].maps[lx].image();
        let iy = t.bases()[cy].maps[ly].image();
        let (x0, x1) = (to_x(ix.lo.to_f64()), to_x(ix.hi.to_f64()));
        let (y0, y1) = (to_y(iy.hi.to_f64()), to_y(iy.lo.to_f64()));
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
            px(x0),
            px(y0),
            px(x1 - x0),
            px(y1 - y0)
        );
    }
    out.push_str("</g>\n");
}

/// Renders a carpet as one panel, or a three-dimensional sponge as its three
/// coordinate-plane projections side by side.
pub fn render_svg(t: &SpongeTemplate, size_px: u32) -> Result<String> {
    let panels: Vec<(usize, usize)> = match t.dim() {
        2 => vec![(0, 1)],
        3 => vec![(0, 1), (0, 2), (1, 2)],
        d => return Err(Error::UnsupportedDimension(d)),
    };
    let size = size_px as f64;
    let width = panels.len() as f64 * size + (panels.len() - 1) as f64 * PANEL_GAP;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = px(width),
        h = px(size)
    );
    for (k, &(cx, cy)) in panels.iter().enumerate() {
        panel(&mut out, t, cx, cy, k as f64 * (size + PANEL_GAP), size);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
