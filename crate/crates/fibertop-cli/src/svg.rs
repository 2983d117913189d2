//! Static SVG 1.1 sketches of planar configurations.
//!
//! The sketch is a fixed 480×360 canvas: labeled points (branch points,
//! zeros), an optional polyline (a lifted path's base trace), and badge
//! lines of summary text in the top-left corner. Coordinates are printed
//! with two decimals so output is deterministic.

use fibertop::Complex64;
use std::fmt::Write as _;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 44.0;

#[derive(Default)]
pub struct Sketch {
    points: Vec<(Complex64, String)>,
    path: Vec<Complex64>,
    badges: Vec<String>,
}

impl Sketch {
    pub fn new() -> Self {
        Sketch::default()
    }

    pub fn point(&mut self, z: Complex64, label: impl Into<String>) {
        self.points.push((z, label.into()));
    }

    pub fn path(&mut self, path: &[Complex64]) {
        self.path = path.to_vec();
    }

    pub fn badge(&mut self, line: impl Into<String>) {
        self.badges.push(line.into());
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self.points.iter().map(|(z, _)| *z).chain(self.path.iter().copied());
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for z in all {
            min_x = min_x.min(z.re);
            max_x = max_x.max(z.re);
            min_y = min_y.min(z.im);
            max_y = max_y.max(z.im);
        }
        if !min_x.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        // Keep a minimum extent so a single point does not collapse the map.
        if max_x - min_x < 1.0 {
            let mid = (min_x + max_x) / 2.0;
            min_x = mid - 0.5;
            max_x = mid + 0.5;
        }
        if max_y - min_y < 1.0 {
            let mid = (min_y + max_y) / 2.0;
            min_y = mid - 0.5;
            max_y = mid + 0.5;
        }
        (min_x, max_x, min_y, max_y)
    }

    pub fn render(&self) -> String {
        let (min_x, max_x, min_y, max_y) = self.bounds();
        let scale = ((WIDTH - 2.0 * MARGIN) / (max_x - min_x))
            .min((HEIGHT - 2.0 * MARGIN) / (max_y - min_y));
        let cx = (min_x + max_x) / 2.0;
        let cy = (min_y + max_y) / 2.0;
        let map = |z: Complex64| -> (f64, f64) {
            (WIDTH / 2.0 + (z.re - cx) * scale, HEIGHT / 2.0 - (z.im - cy) * scale)
        };

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("  <title>planar configuration</title>\n");
        out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

        // Axes, when the origin cross falls inside the view.
        if min_x <= 0.0 && 0.0 <= max_x {
            let (x, _) = map(Complex64::new(0.0, 0.0));
            let _ = writeln!(
                out,
                "  <line x1=\"{x:.2}\" y1=\"0\" x2=\"{x:.2}\" y2=\"{HEIGHT}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>"
            );
        }
        if min_y <= 0.0 && 0.0 <= max_y {
            let (_, y) = map(Complex64::new(0.0, 0.0));
            let _ = writeln!(
                out,
                "  <line x1=\"0\" y1=\"{y:.2}\" x2=\"{WIDTH}\" y2=\"{y:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>"
            );
        }

        if self.path.len() >= 2 {
            let mut attr = String::new();
            for &z in &self.path {
                let (x, y) = map(z);
                let _ = write!(attr, "{x:.2},{y:.2} ");
            }
            let _ = writeln!(
                out,
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"#d97706\" \
                 stroke-width=\"1.5\"/>",
                attr.trim_end()
            );
            let (x, y) = map(self.path[0]);
            let _ = writeln!(
                out,
                "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#d97706\"/>"
            );
        }

        for (z, label) in &self.points {
            let (x, y) = map(*z);
            let _ = writeln!(
                out,
                "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#1f6feb\"/>"
            );
            let _ = writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" \
                 font-size=\"11\" fill=\"#24292f\">{}</text>",
                x + 6.0,
                y - 6.0,
                xml_escape(label)
            );
        }

        for (k, badge) in self.badges.iter().enumerate() {
            let _ = writeln!(
                out,
                "  <text x=\"10\" y=\"{:.2}\" font-family=\"monospace\" \
                 font-size=\"12\" fill=\"#57606a\">{}</text>",
                18.0 + 15.0 * k as f64,
                xml_escape(badge)
            );
        }

        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points_path_and_badges() {
        let mut sketch = Sketch::new();
        sketch.point(Complex64::new(0.0, 0.0), "w0 <cycles>");
        sketch.point(Complex64::new(1.0, 1.0), "w1");
        sketch.path(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 1.0)]);
        sketch.badge("genus 2 & ends 1");
        let svg = sketch.render();
        assert!(svg.starts_with("<svg xmlns="));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("w0 &lt;cycles&gt;"));
        assert!(svg.contains("genus 2 &amp; ends 1"));
    }

    #[test]
    fn empty_sketch_still_renders() {
        let svg = Sketch::new().render();
        assert!(svg.contains("<svg"));
        assert!(svg.contains("</svg>"));
    }
}
