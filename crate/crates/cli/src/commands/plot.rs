//! Static SVG rendering of the analyze CSVs: one thin curve per run, the
//! cross-run mean on top. Output bytes depend only on the input CSV, so
//! identical inputs render identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::args::PlotArgs;
use crate::error::CliError;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 18.0;
const MARGIN_BOTTOM: f64 = 44.0;

struct Table {
    /// t per row.
    ts: Vec<u32>,
    /// one column per run, then the mean column last.
    columns: Vec<Vec<Option<f64>>>,
}

fn parse_csv(text: &str) -> Result<Table, CliError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::usage("empty CSV"))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"t") {
        return Err(CliError::usage("first CSV column must be `t`"));
    }
    let mean_idx = cols
        .iter()
        .position(|&c| c == "mean")
        .ok_or_else(|| CliError::usage("CSV has no `mean` column"))?;
    // value columns: everything between t and mean, then mean itself
    let value_idx: Vec<usize> = (1..mean_idx).chain([mean_idx]).collect();

    let mut ts = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); value_idx.len()];
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(CliError::usage(format!(
                "line {}: expected {} fields, got {}",
                line_no + 1,
                cols.len(),
                fields.len()
            )));
        }
        let t: u32 = fields[0].parse().map_err(|_| {
            CliError::usage(format!("line {}: bad t value {:?}", line_no + 1, fields[0]))
        })?;
        ts.push(t);
        for (slot, &idx) in value_idx.iter().enumerate() {
            let cell = fields[idx].trim();
            if cell.is_empty() {
                columns[slot].push(None);
            } else {
                let v: f64 = cell.parse().map_err(|_| {
                    CliError::usage(format!("line {}: bad value {cell:?}", line_no + 1))
                })?;
                columns[slot].push(Some(v));
            }
        }
    }
    Ok(Table { ts, columns })
}

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 1000.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

fn render_svg(table: &Table, log_time: bool, title: &str) -> Result<String, CliError> {
    let xs: Vec<f64> = table
        .ts
        .iter()
        .map(|&t| {
            let t = t as f64;
            if log_time {
                t.max(1.0).log10()
            } else {
                t
            }
        })
        .collect();

    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    let mut defined = 0usize;
    for col in &table.columns {
        for v in col.iter().flatten() {
            y_lo = y_lo.min(*v);
            y_hi = y_hi.max(*v);
            defined += 1;
        }
    }
    if defined == 0 || xs.is_empty() {
        return Err(CliError::usage("CSV contains no plottable values"));
    }
    if y_lo == y_hi {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    let pad = (y_hi - y_lo) * 0.05;
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    let x_lo = xs.first().copied().unwrap();
    let x_hi = xs.last().copied().unwrap().max(x_lo + 1e-9);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let y_px = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"14\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{title}</text>",
        MARGIN_LEFT + plot_w / 2.0
    );

    // axes and ticks
    let _ = writeln!(
        svg,
        "<line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n<line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>",
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        t = MARGIN_TOP,
        b = HEIGHT - MARGIN_BOTTOM
    );
    for tick in nice_ticks(x_lo, x_hi, 6) {
        let px = x_px(tick);
        let label = if log_time {
            format!("10^{}", fmt_tick(tick))
        } else {
            fmt_tick(tick)
        };
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{b:.2}\" x2=\"{px:.2}\" y2=\"{b2:.2}\" stroke=\"black\"/>\n<text x=\"{px:.2}\" y=\"{ty:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{label}</text>",
            b = HEIGHT - MARGIN_BOTTOM,
            b2 = HEIGHT - MARGIN_BOTTOM + 5.0,
            ty = HEIGHT - MARGIN_BOTTOM + 18.0,
        );
    }
    for tick in nice_ticks(y_lo, y_hi, 6) {
        let py = y_px(tick);
        let _ = writeln!(
            svg,
            "<line x1=\"{l2:.2}\" y1=\"{py:.2}\" x2=\"{l:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n<text x=\"{tx:.2}\" y=\"{ty:.2}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{label}</text>",
            l = MARGIN_LEFT,
            l2 = MARGIN_LEFT - 5.0,
            tx = MARGIN_LEFT - 8.0,
            ty = py + 3.5,
            label = fmt_tick(tick)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">t</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );

    // run curves first, mean (last column) on top
    let n_cols = table.columns.len();
    for (ci, col) in table.columns.iter().enumerate() {
        let is_mean = ci == n_cols - 1;
        let style = if is_mean {
            "stroke=\"black\" stroke-width=\"1.6\""
        } else {
            "stroke=\"#d62728\" stroke-width=\"0.6\" opacity=\"0.3\""
        };
        // split on undefined entries so gaps stay gaps
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, svg: &mut String| {
            if seg.len() >= 2 {
                let _ = writeln!(
                    svg,
                    "<polyline fill=\"none\" {style} points=\"{}\"/>",
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for (i, v) in col.iter().enumerate() {
            match v {
                Some(v) => segment.push(format!("{:.2},{:.2}", x_px(xs[i]), y_px(*v))),
                None => flush(&mut segment, &mut svg),
            }
        }
        flush(&mut segment, &mut svg);
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn execute(args: &PlotArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.csv)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", args.csv.display())))?;
    let table = parse_csv(&text)?;
    let title = args
        .csv
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("series");
    let svg = render_svg(&table, args.log_time, title)?;
    write_atomically(&args.out, svg.as_bytes())?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}
