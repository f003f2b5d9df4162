//! Minimal native SVG line/scatter plots (no plotting dependency).

use std::fmt::Write as _;

pub struct SvgPlot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    x_label: String,
    y_label: String,
    body: String,
}

impl SvgPlot {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), x_label: &str, y_label: &str) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        };
        SvgPlot {
            width: 720.0,
            height: 480.0,
            margin: 60.0,
            x_range: pad(x_range),
            y_range: pad(y_range),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            body: String::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.margin + (x - lo) / (hi - lo) * (self.width - 2.0 * self.margin)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.height - self.margin - (y - lo) / (hi - lo) * (self.height - 2.0 * self.margin)
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str) {
        let mut path = String::new();
        for (k, &(x, y)) in points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{:.2},{:.2} ", self.sx(x), self.sy(y));
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
    }

    pub fn scatter(&mut self, points: &[(f64, f64)], color: &str) {
        for &(x, y) in points {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                self.sx(x),
                self.sy(y)
            );
        }
    }

    pub fn caption(&mut self, text: &str, slot: usize, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" fill="{color}">{text}</text>"#,
            self.margin + 10.0,
            self.margin + 14.0 * (slot + 1) as f64
        );
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(out, r#"<rect width="{}" height="{}" fill="white"/>"#, self.width, self.height);
        // axes
        let (x0, x1) = (self.margin, self.width - self.margin);
        let (y0, y1) = (self.height - self.margin, self.margin);
        let _ = writeln!(
            out,
            r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
        );
        // ticks: 5 per axis
        for k in 0..=5 {
            let f = k as f64 / 5.0;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let sx = self.sx(xv);
            let sy = self.sy(yv);
            let _ = writeln!(
                out,
                r#"<line x1="{sx:.1}" y1="{y0}" x2="{sx:.1}" y2="{:.1}" stroke="black"/><text x="{sx:.1}" y="{:.1}" font-size="10" text-anchor="middle">{xv:.3}</text>"#,
                y0 + 4.0,
                y0 + 16.0
            );
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{sy:.1}" x2="{x0}" y2="{sy:.1}" stroke="black"/><text x="{:.1}" y="{sy:.1}" font-size="10" text-anchor="end">{yv:.3}</text>"#,
                x0 - 4.0,
                x0 - 6.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
            0.5 * self.width,
            self.height - 12.0,
            self.x_label
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
            0.5 * self.height,
            0.5 * self.height,
            self.y_label
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_svg() {
        let mut p = SvgPlot::new((0.0, 1.0), (0.0, 2.0), "t", "norm");
        p.polyline(&[(0.0, 0.0), (0.5, 1.0), (1.0, 2.0)], "#1f77b4");
        p.scatter(&[(0.25, 0.5)], "#d62728");
        let svg = p.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("<path"));
        assert!(svg.contains("<circle"));
    }
}
