use std::fmt::Write as _;

/// Minimal standalone SVG scatter/stem plot with the data table embedded
/// as a comment, so the artifact is self-describing and diffable.
pub struct SvgPlot {
    title: String,
    width: f64,
    height: f64,
    series: Vec<(String, Vec<(f64, f64)>)>,
}

impl SvgPlot {
    pub fn new(title: &str) -> Self {
        Self {
            title: title.to_string(),
            width: 720.0,
            height: 420.0,
            series: Vec::new(),
        }
    }

    pub fn series(mut self, name: &str, points: Vec<(f64, f64)>) -> Self {
        self.series.push((name.to_string(), points));
        self
    }

    pub fn render(&self) -> String {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for (_, pts) in &self.series {
            for (x, y) in pts {
                if x.is_finite() && y.is_finite() {
                    xs.push(*x);
                    ys.push(*y);
                }
            }
        }
        let (x0, x1) = bounds(&xs);
        let (y0, y1) = bounds(&ys);
        let margin = 50.0;
        let sx = |x: f64| margin + (x - x0) / (x1 - x0).max(1e-300) * (self.width - 2.0 * margin);
        let sy =
            |y: f64| self.height - margin - (y - y0) / (y1 - y0).max(1e-300) * (self.height - 2.0 * margin);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(s, "<!-- data table");
        for (name, pts) in &self.series {
            let _ = writeln!(s, "{name}:");
            for (x, y) in pts {
                let _ = writeln!(s, "{x:.17e},{y:.17e}");
            }
        }
        let _ = writeln!(s, "-->");
        let _ = writeln!(
            s,
            r#"<rect width="100%" height="100%" fill="white"/><text x="{}" y="24" text-anchor="middle" font-family="monospace" font-size="15">{}</text>"#,
            self.width / 2.0,
            xml_escape(&self.title)
        );
        // axes
        let _ = writeln!(
            s,
            r#"<line x1="{m}" y1="{h}" x2="{w}" y2="{h}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{h}" stroke="black"/>"#,
            m = margin,
            h = self.height - margin,
            w = self.width - margin
        );
        let _ = writeln!(
            s,
            r#"<text x="{m}" y="{ty}" font-family="monospace" font-size="11">[{x0:.3e}, {x1:.3e}] x [{y0:.3e}, {y1:.3e}]</text>"#,
            m = margin,
            ty = self.height - margin + 28.0,
        );
        let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
        for (si, (name, pts)) in self.series.iter().enumerate() {
            let color = colors[si % colors.len()];
            for (x, y) in pts {
                if !(x.is_finite() && y.is_finite()) {
                    continue;
                }
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    sx(*x),
                    sy(*y)
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="{color}">{}</text>"#,
                self.width - 180.0,
                30.0 + 16.0 * si as f64,
                xml_escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 1.0);
    }
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if (hi - lo).abs() < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
