use std::fmt::Write as _;

use tanhrank::cover::{Cover, Partition, PointSet};
use tanhrank::rational::to_f64;
use tanhrank::Rational;

pub enum Overlay {
    None,
    Partition(Partition),
    /// Cover centres with their radius.
    Cover(Cover, Rational),
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.min[0]) * self.scale
    }

    // SVG y grows downward.
    fn y(&self, v: f64) -> f64 {
        SIZE - MARGIN - (v - self.min[1]) * self.scale
    }
}

fn coords(p: &[Rational]) -> [f64; 2] {
    [to_f64(&p[0]), p.get(1).map_or(0.0, to_f64)]
}

/// Renders points of dimension 1 or 2 as an SVG document.
pub fn render(points: &PointSet, overlay: &Overlay) -> Result<String, String> {
    if points.p() > 2 {
        return Err(format!("can only plot dimension 1 or 2, got {}", points.p()));
    }
    let pts: Vec<[f64; 2]> = points.points().iter().map(|p| coords(p)).collect();
    let mut boxes: Vec<([f64; 2], [f64; 2], usize)> = Vec::new();
    let mut colour_of = vec![usize::MAX; pts.len()];
    match overlay {
        Overlay::None => {}
        Overlay::Partition(partition) => {
            for (g, group) in partition.groups.iter().enumerate() {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for &i in group {
                    let p = pts.get(i).ok_or_else(|| format!("partition refers to point {} of {}", i + 1, pts.len()))?;
                    colour_of[i] = g;
                    for k in 0..2 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                if !group.is_empty() {
                    boxes.push((lo, hi, g));
                }
            }
        }
        Overlay::Cover(cover, eps) => {
            let e = to_f64(eps);
            for (g, c) in cover.points.iter().enumerate() {
                if c.len() != points.p() {
                    return Err(format!("cover point {} has dimension {}", g + 1, c.len()));
                }
                let c = coords(c);
                let half = if points.p() == 1 { [e, 0.0] } else { [e, e] };
                boxes.push(([c[0] - half[0], c[1] - half[1]], [c[0] + half[0], c[1] + half[1]], g));
            }
        }
    }

    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts.iter().copied().chain(boxes.iter().flat_map(|b| [b.0, b.1])) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if pts.is_empty() && boxes.is_empty() {
        lo = [0.0; 2];
        hi = [1.0; 2];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let frame = Frame { min: lo, scale: (SIZE - 2.0 * MARGIN) / span };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (a, b, g) in &boxes {
        let colour = PALETTE[g % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{colour}" fill-opacity="0.15" stroke="{colour}"/>"#,
            frame.x(a[0]) - 3.0,
            frame.y(b[1]) - 3.0,
            (b[0] - a[0]) * frame.scale + 6.0,
            (b[1] - a[1]) * frame.scale + 6.0,
        );
    }
    for (i, p) in pts.iter().enumerate() {
        let colour = PALETTE.get(colour_of[i] % PALETTE.len()).filter(|_| colour_of[i] != usize::MAX).unwrap_or(&"black");
        let _ = writeln!(svg, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{colour}"/>"#, frame.x(p[0]), frame.y(p[1]));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
