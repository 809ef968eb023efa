//! Deterministic SVG drawings of block maps: domain blocks on the left,
//! their images on the right, both inside the unit square.

use std::fmt::Write as _;

use crate::cantor::{CantorBlock, CantorPoint, PiecewiseBlockMap};
use crate::tape::SymbolIndex;

const PANEL: f64 = 400.0;
const MARGIN: f64 = 30.0;
const GAP: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

#[derive(Debug, Clone, Default)]
pub struct RenderOptions<'a> {
    pub title: Option<String>,
    /// Overrides the default piece labels, indexed like the map's pieces.
    pub labels: Option<Vec<String>>,
    /// Orbit points drawn on the domain panel.
    pub orbit: Option<&'a [CantorPoint]>,
    /// Also draw the blocks on which the map is the identity.
    pub show_identity: bool,
}

/// Window word with a dot before position 0, e.g. `0.1`.
pub fn word_label(word: &[SymbolIndex], x_depth: usize, alphabet: &[String]) -> String {
    let mut out = String::new();
    for (i, &s) in word.iter().enumerate() {
        if i == x_depth {
            out.push('.');
        } else if i > 0 && alphabet.iter().any(|a| a.len() > 1) {
            out.push(' ');
        }
        out.push_str(&alphabet[s as usize]);
    }
    out
}

fn rect(out: &mut String, left: f64, b: &CantorBlock, fill: &str, opacity: f64, label: &str) {
    let (x0, x1) = b.x_interval();
    let (y0, y1) = b.y_interval();
    let (x0, x1, y0, y1) = (x0.to_f64(), x1.to_f64(), y0.to_f64(), y1.to_f64());
    let sx = left + PANEL * x0;
    let sy = MARGIN + PANEL * (1.0 - y1);
    let w = PANEL * (x1 - x0);
    let h = PANEL * (y1 - y0);
    writeln!(
        out,
        r#"  <rect x="{sx:.3}" y="{sy:.3}" width="{w:.3}" height="{h:.3}" fill="{fill}" fill-opacity="{opacity:.2}" stroke="black" stroke-width="0.5"/>"#
    )
    .unwrap();
    if !label.is_empty() {
        let size = (w.min(h) * 0.4).clamp(4.0, 16.0);
        writeln!(
            out,
            r#"  <text x="{:.3}" y="{:.3}" font-size="{size:.1}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            sx + w / 2.0,
            sy + h / 2.0,
            escape(label)
        )
        .unwrap();
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_blockmap(map: &PiecewiseBlockMap, alphabet: &[String], opts: &RenderOptions<'_>) -> String {
    let width = 2.0 * PANEL + 2.0 * MARGIN + GAP;
    let height = PANEL + 2.0 * MARGIN + 20.0;
    let left = MARGIN;
    let right = MARGIN + PANEL + GAP;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    )
    .unwrap();
    if let Some(t) = &opts.title {
        writeln!(out, "  <title>{}</title>", escape(t)).unwrap();
    }
    for (x, name) in [(left, "domain"), (right, "image")] {
        writeln!(
            out,
            r#"  <rect x="{x:.3}" y="{MARGIN:.3}" width="{PANEL:.3}" height="{PANEL:.3}" fill="none" stroke="black" stroke-width="1"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle">{name}</text>"#,
            x + PANEL / 2.0,
            MARGIN + PANEL + 20.0
        )
        .unwrap();
    }
    if opts.show_identity {
        for b in map.identity_domains() {
            rect(&mut out, left, b, "#dddddd", 0.6, "");
            rect(&mut out, right, b, "#dddddd", 0.6, "");
        }
    }
    for (i, p) in map.pieces().iter().enumerate() {
        let label = match &opts.labels {
            Some(l) if i < l.len() => l[i].clone(),
            _ => word_label(&p.word, map.x_depth(), alphabet),
        };
        let color = PALETTE[i % PALETTE.len()];
        rect(&mut out, left, &p.domain, color, 0.7, &label);
        rect(&mut out, right, &p.image, color, 0.7, &label);
    }
    if let Some(points) = opts.orbit {
        for p in points {
            writeln!(
                out,
                r#"  <circle cx="{:.3}" cy="{:.3}" r="2" fill="black"/>"#,
                left + PANEL * p.x.to_f64(),
                MARGIN + PANEL * (1.0 - p.y.to_f64())
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
