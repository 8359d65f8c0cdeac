//! Minimal SVG emission for trace waveforms and diagnosis-label
//! timelines.

use std::io::Write;
use std::path::{Path, PathBuf};

use vsr_core::sim::Trace;

use crate::error::Result;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;

struct Scale {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Scale {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min).max(1e-12) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN
            - (v - self.y_min) / (self.y_max - self.y_min).max(1e-12) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn polyline(points: impl Iterator<Item = (f64, f64)>, scale: &Scale, color: &str) -> String {
    let coords: Vec<String> = points
        .map(|(x, y)| format!("{:.2},{:.2}", scale.x(x), scale.y(y)))
        .collect();
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn svg_document(title: &str, body: &str, scale: &Scale, x_label: &str, y_label: &str) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{tx}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
            "<text x=\"{tx}\" y=\"{bl}\" font-size=\"11\" text-anchor=\"middle\">{xl}</text>\n",
            "<text x=\"14\" y=\"{ty}\" font-size=\"11\" text-anchor=\"middle\" ",
            "transform=\"rotate(-90 14 {ty})\">{yl}</text>\n",
            "<text x=\"{m}\" y=\"{bl}\" font-size=\"10\">{x0:.3}</text>\n",
            "<text x=\"{xr}\" y=\"{bl}\" font-size=\"10\" text-anchor=\"end\">{x1:.3}</text>\n",
            "<text x=\"{m2}\" y=\"{yb}\" font-size=\"10\" text-anchor=\"end\">{y0:.2}</text>\n",
            "<text x=\"{m2}\" y=\"{yt}\" font-size=\"10\" text-anchor=\"end\">{y1:.2}</text>\n",
            "<rect x=\"{m}\" y=\"{m}\" width=\"{iw}\" height=\"{ih}\" fill=\"none\" ",
            "stroke=\"#999\"/>\n{body}</svg>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        tx = WIDTH / 2.0,
        ty = HEIGHT / 2.0,
        bl = HEIGHT - 12.0,
        m = MARGIN,
        m2 = MARGIN - 4.0,
        xr = WIDTH - MARGIN,
        yb = HEIGHT - MARGIN,
        yt = MARGIN + 4.0,
        iw = WIDTH - 2.0 * MARGIN,
        ih = HEIGHT - 2.0 * MARGIN,
        title = title,
        xl = x_label,
        yl = y_label,
        x0 = scale.x_min,
        x1 = scale.x_max,
        y0 = scale.y_min,
        y1 = scale.y_max,
        body = body,
    )
}

const PHASE_COLORS: [&str; 3] = ["#d62728", "#2ca02c", "#1f77b4"];

/// Writes `<stem>_currents.svg` and `<stem>_udc.svg` into `out_dir`.
pub fn plot_trace(trace: &Trace, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let t0 = trace.records.first().map_or(0.0, |r| r.t);
    let t1 = trace.records.last().map_or(1.0, |r| r.t);

    let mut i_max = 1.0f64;
    for r in &trace.records {
        for i in r.i_abc {
            i_max = i_max.max(i.abs());
        }
    }
    let scale = Scale { x_min: t0, x_max: t1, y_min: -i_max, y_max: i_max };
    let mut body = String::new();
    for phase in 0..3 {
        body.push_str(&polyline(
            trace.records.iter().map(|r| (r.t, r.i_abc[phase])),
            &scale,
            PHASE_COLORS[phase],
        ));
    }
    let currents_path = out_dir.join(format!("{stem}_currents.svg"));
    let mut f = std::fs::File::create(&currents_path)?;
    f.write_all(svg_document("phase currents", &body, &scale, "t / s", "i / A").as_bytes())?;

    let u_max = trace.records.iter().map(|r| r.u_dc).fold(1.0, f64::max);
    let scale = Scale { x_min: t0, x_max: t1, y_min: 0.0, y_max: 1.1 * u_max };
    let body = polyline(trace.records.iter().map(|r| (r.t, r.u_dc)), &scale, "#9467bd");
    let udc_path = out_dir.join(format!("{stem}_udc.svg"));
    let mut f = std::fs::File::create(&udc_path)?;
    f.write_all(svg_document("DC-link voltage", &body, &scale, "t / s", "u_dc / V").as_bytes())?;

    Ok(vec![currents_path, udc_path])
}

const LABEL_COLORS: [&str; 9] = [
    "#7f7f7f", "#d62728", "#ff7f0e", "#2ca02c", "#17becf", "#1f77b4", "#9467bd", "#e377c2",
    "#000000",
];

/// Renders a diagnosis log (window rows) as per-label count polylines;
/// the ninth line is the error count.
pub fn plot_diagnosis_log(log_text: &str, out_dir: &Path, stem: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let mut rows: Vec<(f64, [f64; 9])> = Vec::new();
    for line in log_text.lines().skip(1) {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 11 {
            continue;
        }
        let idx: f64 = fields[0].parse().unwrap_or(f64::NAN);
        let mut counts = [0.0; 9];
        for k in 0..9 {
            counts[k] = fields[2 + k].parse().unwrap_or(0.0);
        }
        rows.push((idx, counts));
    }
    let x_max = rows.last().map_or(1.0, |r| r.0).max(1.0);
    let y_max = rows.iter().flat_map(|r| r.1.iter().copied()).fold(1.0, f64::max);
    let scale = Scale { x_min: 0.0, x_max, y_min: 0.0, y_max: 1.05 * y_max };
    let mut body = String::new();
    for k in 0..9 {
        body.push_str(&polyline(
            rows.iter().map(|(x, c)| (*x, c[k])),
            &scale,
            LABEL_COLORS[k],
        ));
    }
    let path = out_dir.join(format!("{stem}_labels.svg"));
    let mut f = std::fs::File::create(&path)?;
    f.write_all(
        svg_document("window label counts", &body, &scale, "window", "count").as_bytes(),
    )?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsr_core::sim::{simulate, FaultScenario, SimParams};

    #[test]
    fn trace_plots_are_valid_svg() {
        let trace = simulate(&FaultScenario::healthy(), 0.02, &SimParams::default(), 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = plot_trace(&trace, dir.path(), "demo").unwrap();
        assert_eq!(paths.len(), 2);
        for path in paths {
            let text = std::fs::read_to_string(path).unwrap();
            assert!(text.starts_with("<svg"));
            assert!(text.ends_with("</svg>\n"));
            assert!(text.contains("<polyline"));
        }
    }

    #[test]
    fn diagnosis_log_plot_parses_rows() {
        let log = "window_index,t_start,counts_F0,counts_F1,counts_F2,counts_F3,counts_F4,\
counts_F5,counts_F6,counts_F7,count_err,fault_switches\n\
0,0.000000,200,0,0,0,0,0,0,0,0,-\n\
1,0.020000,100,100,0,0,0,0,0,0,0,SaP\n";
        let dir = tempfile::tempdir().unwrap();
        let path = plot_diagnosis_log(log, dir.path(), "diag").unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.contains("<polyline"));
    }
}
