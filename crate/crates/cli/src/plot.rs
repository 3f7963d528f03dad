//! Deterministic log-log SVG of an error sweep.

use std::fmt::Write as _;
use std::io::Read;

use nsgf_core::fit_decay;

use crate::commands::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// `(N, error)` pairs from a sweep CSV.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<(f64, f64)>, CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(nsgf_core::Error::from)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::config(format!("sweep CSV lacks column '{name}'")))
    };
    let (n_col, e_col) = (col("N")?, col("error")?);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(nsgf_core::Error::from)?;
        let parse = |i: usize| {
            record[i]
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("bad number '{}'", &record[i])))
        };
        out.push((parse(n_col)?, parse(e_col)?));
    }
    Ok(out)
}

/// Polyline of the positive points plus a reference line of slope `−alpha`
/// through the first one.
pub fn render(points: &[(f64, f64)], alpha: f64) -> Result<String, CliError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, e)| n > 0.0 && e > 0.0)
        .map(|(n, e)| (n.log10(), e.log10()))
        .collect();
    if pts.len() < 2 {
        return Err(CliError::config("plot needs at least two positive points"));
    }
    let (x0, y0) = pts[0];
    let x_lo = pts
        .iter()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min)
        .floor();
    let x_hi = pts
        .iter()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil();
    let x_last = pts.last().map(|p| p.0).unwrap_or(x0);
    let ref_end = y0 - alpha * (x_last - x0);
    let ys = pts.iter().map(|p| p.1).chain([y0, ref_end]);
    let y_lo = ys.clone().fold(f64::INFINITY, f64::min).floor();
    let y_hi = ys.fold(f64::NEG_INFINITY, f64::max).ceil();
    let x_span = (x_hi - x_lo).max(1.0);
    let y_span = (y_hi - y_lo).max(1.0);
    let sx = |x: f64| MARGIN + (x - x_lo) / x_span * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / y_span * (HEIGHT - 2.0 * MARGIN);

    let ns: Vec<usize> = points
        .iter()
        .filter(|&&(n, e)| n > 0.0 && e > 0.0)
        .map(|&(n, _)| n as usize)
        .collect();
    let errs: Vec<f64> = points
        .iter()
        .filter(|&&(n, e)| n > 0.0 && e > 0.0)
        .map(|p| p.1)
        .collect();
    let slope = fit_decay(&ns, &errs, 0..ns.len()).map_err(CliError::from)?;

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(w, "<!-- nsgf sweep plot: log10 N vs log10 error -->");
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<g stroke="black" stroke-width="1"><line x1="{MARGIN}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{MARGIN}" y1="{t}" x2="{MARGIN}" y2="{b}"/></g>"#,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN
    );
    let _ = writeln!(w, r#"<g font-family="sans-serif" font-size="11">"#);
    for d in (x_lo as i64)..=(x_hi as i64) {
        let x = sx(d as f64);
        let _ = writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - MARGIN + 16.0
        );
    }
    for d in (y_lo as i64)..=(y_hi as i64) {
        let y = sy(d as f64);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">1e{d}</text>"#,
            MARGIN - 6.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">N</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">error</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(w, "</g>");
    let data: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        w,
        r##"<polyline class="data" data-fitted-slope="{slope:.6}" fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
        data.join(" ")
    );
    let _ = writeln!(
        w,
        r##"<polyline class="reference" data-slope="{:.6}" fill="none" stroke="#d62728" stroke-dasharray="6 4" points="{:.2},{:.2} {:.2},{:.2}"/>"##,
        -alpha,
        sx(x0),
        sy(y0),
        sx(x_last),
        sy(ref_end)
    );
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_and_fit_slopes() {
        let pts: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let n = (1u32 << k) as f64;
                (n, n.powf(-0.5))
            })
            .collect();
        let svg = render(&pts, 0.5).unwrap();
        assert!(svg.contains(r#"data-fitted-slope="-0.500000""#));
        assert!(svg.contains(r#"data-slope="-0.500000""#));
        assert_eq!(svg, render(&pts, 0.5).unwrap());
    }

    #[test]
    fn csv_columns_by_name() {
        let text = "N,error,N_pow_alpha_times_error\n2,0.5,0.7\n4,0.25,0.5\n";
        assert_eq!(
            read_sweep_csv(text.as_bytes()).unwrap(),
            vec![(2.0, 0.5), (4.0, 0.25)]
        );
        assert!(read_sweep_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn too_few_points() {
        assert!(render(&[(1.0, 1.0)], 0.5).is_err());
    }
}
