//! Byte-deterministic SVG rendering of an original curve and its
//! rearrangement. Both curves are drawn into a fixed 1000 x 1000 viewBox
//! with 5% padding; colors, stroke widths, and number formatting are
//! fixed constants, so identical inputs yield identical bytes.

use curveclose_core::rearrange::Cuts;
use curveclose_core::{Composite, CurveTable, Vec2};

const VIEW: f64 = 1000.0;
const PAD: f64 = 0.05;
const ORIGINAL_COLOR: &str = "#1f6fb4";
const REARRANGED_COLOR: &str = "#d62728";
const CUT_COLOR: &str = "#2ca02c";
const STROKE_WIDTH: &str = "3";
const CUT_RADIUS: &str = "6";

struct Frame {
    scale: f64,
    offset: Vec2,
}

impl Frame {
    /// Uniform scale-and-center of the joint bounding box into the padded
    /// viewBox, with the y axis flipped to SVG orientation.
    fn fit<'a>(points: impl Iterator<Item = &'a Vec2>) -> Frame {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let inner = VIEW * (1.0 - 2.0 * PAD);
        let scale = inner / span;
        let center = (lo + hi) * 0.5;
        Frame {
            scale,
            offset: center,
        }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        (
            VIEW * 0.5 + (p.x - self.offset.x) * self.scale,
            VIEW * 0.5 - (p.y - self.offset.y) * self.scale,
        )
    }
}

fn path(points: &[Vec2], frame: &Frame, color: &str) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = frame.map(*p);
        let cmd = if i == 0 { 'M' } else { 'L' };
        d.push_str(&format!("{cmd}{x:.3} {y:.3} "));
    }
    let d = d.trim_end();
    format!("  <path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{STROKE_WIDTH}\"/>\n")
}

/// Render the original curve with its cut points, plus (optionally) the
/// rearranged composite, into one SVG document.
pub fn render(
    table: &CurveTable,
    cuts: &Cuts,
    rearranged: Option<&Composite>,
) -> curveclose_core::Result<String> {
    let original: Vec<Vec2> = table.grid_nodes().map(|(_, p)| p).collect();
    let frame = Frame::fit(
        original
            .iter()
            .chain(rearranged.iter().flat_map(|c| c.points().iter())),
    );
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {VIEW:.0} {VIEW:.0}\">\n"
    ));
    out.push_str(&path(&original, &frame, ORIGINAL_COLOR));
    if let Some(r) = rearranged {
        out.push_str(&path(r.points(), &frame, REARRANGED_COLOR));
    }
    for i in 0..=cuts.k() {
        let (x, y) = frame.map(table.position(cuts.at(i))?);
        out.push_str(&format!(
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{CUT_RADIUS}\" fill=\"{CUT_COLOR}\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
