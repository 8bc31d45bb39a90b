//! A small hand-rolled SVG line-chart writer; enough for RMSE-vs-noise
//! plots without pulling in a plotting stack.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct LineChart {
    title: String,
    x_label: String,
    y_label: String,
    x_ticks: Vec<(f64, String)>,
    series: Vec<(String, Vec<(f64, f64)>)>,
}

impl LineChart {
    pub fn new(title: String, x_label: String, y_label: String) -> Self {
        Self {
            title,
            x_label,
            y_label,
            x_ticks: Vec::new(),
            series: Vec::new(),
        }
    }

    pub fn add_x_tick(&mut self, x: f64, label: String) {
        self.x_ticks.push((x, label));
    }

    pub fn add_series(&mut self, name: String, points: Vec<(f64, f64)>) {
        self.series.push((name, points));
    }

    pub fn render(&self) -> String {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y_max = 0.0f64;
        for (_, pts) in &self.series {
            for (x, y) in pts {
                x_min = x_min.min(*x);
                x_max = x_max.max(*x);
                y_max = y_max.max(*y);
            }
        }
        if !x_min.is_finite() || x_max <= x_min {
            x_min = 0.0;
            x_max = 1.0;
        }
        if y_max <= 0.0 {
            y_max = 1.0;
        }
        y_max *= 1.05;

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let sy = |y: f64| MARGIN_TOP + (1.0 - y / y_max) * plot_h;

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(
            out,
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            xml_escape(&self.title)
        );

        // axes
        let x0 = MARGIN_LEFT;
        let y0 = MARGIN_TOP + plot_h;
        let _ = writeln!(
            out,
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>",
            x0 + plot_w
        );
        let _ = writeln!(
            out,
            "<line x1=\"{x0}\" y1=\"{}\" x2=\"{x0}\" y2=\"{y0}\" stroke=\"black\"/>",
            MARGIN_TOP
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 8.0,
            xml_escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            xml_escape(&self.y_label)
        );

        // y ticks: 5 evenly spaced
        for i in 0..=4 {
            let y_val = y_max * i as f64 / 4.0;
            let y_px = sy(y_val);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{y_px}\" x2=\"{x0}\" y2=\"{y_px}\" stroke=\"black\"/>",
                x0 - 4.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{:.3e}</text>",
                x0 - 7.0,
                y_px + 3.5,
                y_val
            );
            if i > 0 {
                let _ = writeln!(
                    out,
                    "<line x1=\"{x0}\" y1=\"{y_px}\" x2=\"{}\" y2=\"{y_px}\" stroke=\"#dddddd\"/>",
                    x0 + plot_w
                );
            }
        }

        for (x, label) in &self.x_ticks {
            let x_px = sx(*x);
            let _ = writeln!(
                out,
                "<line x1=\"{x_px}\" y1=\"{y0}\" x2=\"{x_px}\" y2=\"{}\" stroke=\"black\"/>",
                y0 + 4.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{x_px}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
                y0 + 16.0,
                xml_escape(label)
            );
        }

        for (i, (name, pts)) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
                .collect();
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>",
                path.join(" ")
            );
            for (x, y) in pts {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"{color}\"/>",
                    sx(*x),
                    sy(*y)
                );
            }
            // legend
            let ly = MARGIN_TOP + 16.0 * i as f64;
            let lx = WIDTH - MARGIN_RIGHT + 12.0;
            let _ = writeln!(
                out,
                "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                lx + 18.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                lx + 24.0,
                ly + 3.5,
                xml_escape(name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
