//! Minimal SVG emission: fixed-viewport polylines and scatters.
//!
//! CSV is the primary artifact; these plots are a convenience for eyeballing
//! boundary curves, minorants, trajectories and phase grids.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PAD: f64 = 60.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn data_bounds(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (x, y) in points {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !xmin.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if xmax - xmin < 1e-12 {
        xmax = xmin + 1.0;
    }
    if ymax - ymin < 1e-12 {
        ymax = ymin + 1.0;
    }
    (xmin, xmax, ymin, ymax)
}

struct Mapper {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Mapper {
    fn x(&self, x: f64) -> f64 {
        PAD + (x - self.xmin) / (self.xmax - self.xmin) * (WIDTH - 2.0 * PAD)
    }

    fn y(&self, y: f64) -> f64 {
        HEIGHT - PAD - (y - self.ymin) / (self.ymax - self.ymin) * (HEIGHT - 2.0 * PAD)
    }
}

fn header(x_label: &str, y_label: &str, m: &Mapper) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<line x1=\"{p}\" y1=\"{hb}\" x2=\"{wr}\" y2=\"{hb}\" stroke=\"black\"/>\n",
            "<line x1=\"{p}\" y1=\"{p}\" x2=\"{p}\" y2=\"{hb}\" stroke=\"black\"/>\n",
            "<text x=\"{xc}\" y=\"{h2}\" text-anchor=\"middle\" font-size=\"14\">{xl}</text>\n",
            "<text x=\"16\" y=\"{yc}\" text-anchor=\"middle\" font-size=\"14\" ",
            "transform=\"rotate(-90 16 {yc})\">{yl}</text>\n",
            "<text x=\"{p}\" y=\"{hb2}\" font-size=\"11\">{x0:.4}</text>\n",
            "<text x=\"{wr}\" y=\"{hb2}\" text-anchor=\"end\" font-size=\"11\">{x1:.4}</text>\n",
            "<text x=\"{p2}\" y=\"{hb}\" text-anchor=\"end\" font-size=\"11\">{y0:.4}</text>\n",
            "<text x=\"{p2}\" y=\"{pt}\" text-anchor=\"end\" font-size=\"11\">{y1:.4}</text>\n",
        ),
        w = WIDTH,
        h = HEIGHT,
        p = PAD,
        p2 = PAD - 6.0,
        pt = PAD + 4.0,
        wr = WIDTH - PAD,
        hb = HEIGHT - PAD,
        hb2 = HEIGHT - PAD + 16.0,
        xc = WIDTH / 2.0,
        h2 = HEIGHT - 16.0,
        yc = HEIGHT / 2.0,
        xl = x_label,
        yl = y_label,
        x0 = m.xmin,
        x1 = m.xmax,
        y0 = m.ymin,
        y1 = m.ymax,
    )
}

/// Named polyline series on shared axes.
pub fn polyline_svg(series: &[(String, Vec<(f64, f64)>)], x_label: &str, y_label: &str) -> String {
    let (xmin, xmax, ymin, ymax) =
        data_bounds(series.iter().flat_map(|(_, pts)| pts.iter().copied()));
    let m = Mapper {
        xmin,
        xmax,
        ymin,
        ymax,
    };
    let mut svg = header(x_label, y_label, &m);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", m.x(x), m.y(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            WIDTH - PAD + 4.0,
            PAD + 16.0 * i as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Scatter of colored classes (one legend entry per class).
pub fn scatter_svg(
    points: &[(f64, f64, usize)],
    classes: &[&str],
    x_label: &str,
    y_label: &str,
) -> String {
    let (xmin, xmax, ymin, ymax) = data_bounds(points.iter().map(|&(x, y, _)| (x, y)));
    let m = Mapper {
        xmin,
        xmax,
        ymin,
        ymax,
    };
    let mut svg = header(x_label, y_label, &m);
    for &(x, y, class) in points {
        let color = PALETTE[class % PALETTE.len()];
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
            m.x(x),
            m.y(y)
        ));
    }
    for (i, name) in classes.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            WIDTH - PAD + 4.0,
            PAD + 16.0 * i as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
