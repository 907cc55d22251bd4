//! Static SVG figures of sections and shadows.

use std::fmt::Write;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::geometry::section;
use crate::illumination::silhouette;
use crate::symmetry::symmetry_center;
use crate::tolerance::Tolerances;
use crate::vector::{AffineSubspace, Vector};

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// Maps chart coordinates to the canvas, centering the bounding box of the
/// drawn points and flipping the vertical axis.
struct Frame {
    center: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: &[Vector]) -> Frame {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        Frame {
            center: [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])],
            scale: (CANVAS - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: &Vector) -> (f64, f64) {
        (
            CANVAS / 2.0 + self.scale * (p[0] - self.center[0]),
            CANVAS / 2.0 - self.scale * (p[1] - self.center[1]),
        )
    }
}

/// Vertices of a 2D body in counterclockwise order.
fn ring(polygon: &ConvexBody) -> Vec<Vector> {
    let c = Vector::centroid(polygon.vertices()).expect("nonempty body");
    let mut pts = polygon.vertices().to_vec();
    pts.sort_by(|a, b| {
        let ang = |p: &Vector| (p[1] - c[1]).atan2(p[0] - c[0]);
        ang(a).total_cmp(&ang(b))
    });
    pts
}

fn path(frame: &Frame, pts: &[Vector]) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

fn header(title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n\
         <title>{title}</title>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// The section of a 3D body by `{normal . x = offset}`, drawn in the plane's
/// chart, with its center of symmetry marked when it has one.
pub fn section_svg(
    b: &ConvexBody,
    normal: &Vector,
    offset: f64,
    tol: &Tolerances,
) -> Result<String> {
    if b.dim() != 3 {
        return Err(Error::Precondition("section plots need a 3D body".into()));
    }
    let h = AffineSubspace::hyperplane(normal, offset)?;
    let sec = section(b, &h, tol.section)?;
    let sec = sec
        .proper()
        .ok_or_else(|| Error::Degenerate("the plane misses the interior of the body".into()))?;
    let pts = ring(&sec.body);
    let frame = Frame::fit(&pts);
    let mut svg = header("section");
    let _ = writeln!(
        svg,
        "<path d=\"{}\" fill=\"#dde8f5\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
        path(&frame, &pts)
    );
    if let Some(c) = symmetry_center(&sec.body, tol)?.center {
        let (x, y) = frame.map(&c);
        let _ = writeln!(
            svg,
            "<circle class=\"center\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"5\" fill=\"#c0392b\"/>"
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// The shadow of a 3D body along `d`, with the silhouette vertices colored
/// by their height along `d` (blue low, red high).
pub fn silhouette_svg(b: &ConvexBody, d: &Vector) -> Result<String> {
    let sil = silhouette(b, d)?;
    let pts = ring(&sil.shadow);
    let frame = Frame::fit(&pts);
    let heights: Vec<f64> = sil
        .vertices
        .iter()
        .map(|&i| sil.direction.dot(&b.vertices()[i]))
        .collect();
    let (lo, hi) = heights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &z| {
            (l.min(z), h.max(z))
        });
    let mut svg = header("silhouette");
    let _ = writeln!(
        svg,
        "<path d=\"{}\" fill=\"#eeeeee\" stroke=\"#555555\" stroke-width=\"1\"/>",
        path(&frame, &pts)
    );
    for (&i, &z) in sil.vertices.iter().zip(&heights) {
        let t = if hi > lo { (z - lo) / (hi - lo) } else { 0.5 };
        let (x, y) = frame.map(&sil.chart.to_chart(&b.vertices()[i]));
        let (red, blue) = ((255.0 * t).round() as u8, (255.0 * (1.0 - t)).round() as u8);
        let _ = writeln!(
            svg,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"rgb({red},0,{blue})\"/>"
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate, BodySpec};

    #[test]
    fn cube_mid_section_is_a_centered_square() {
        let cube = generate(&BodySpec::cube()).unwrap();
        let svg = section_svg(&cube, &Vector::basis(3, 2), 0.0, &Tolerances::default()).unwrap();
        assert_eq!(svg.matches(" L").count(), 3);
        assert!(svg.contains("class=\"center\" cx=\"400.000\" cy=\"400.000\""));
        assert!(svg.contains("width=\"800\" height=\"800\""));
    }

    #[test]
    fn plane_missing_the_body_is_an_error() {
        let cube = generate(&BodySpec::cube()).unwrap();
        assert!(section_svg(&cube, &Vector::basis(3, 2), 3.0, &Tolerances::default()).is_err());
        assert!(section_svg(&cube, &Vector::zeros(3), 0.0, &Tolerances::default()).is_err());
    }

    #[test]
    fn ball_shadow_is_round() {
        let ball = generate(&BodySpec::diagonal_ellipsoid([1.0, 1.0, 1.0])).unwrap();
        let sil = silhouette(&ball, &Vector::basis(3, 2)).unwrap();
        let radii: Vec<f64> = sil.shadow.vertices().iter().map(Vector::norm).collect();
        assert!(radii.iter().all(|r| (0.97..=1.0 + 1e-12).contains(r)));
        let svg = silhouette_svg(&ball, &Vector::basis(3, 2)).unwrap();
        assert_eq!(svg.matches("<circle").count(), sil.vertices.len());
    }
}
