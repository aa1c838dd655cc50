//! CSV and SVG emission.

use std::fmt::Write as _;
use std::io::Write;

use hyperc2pf::metrics::SweepTable;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with twelve significant digits; plain notation for moderate
/// magnitudes, exponent notation otherwise.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let probe = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp = probe
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        probe
    }
}

pub const SWEEP_HEADER: [&str; 7] = [
    "x",
    "r",
    "F_mean",
    "F_se",
    "eta_numeric",
    "eta_numeric_se",
    "eta_closed",
];

pub fn sweep_csv<W: Write>(table: &SweepTable, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in &table.rows {
        w.write_record([
            sig(row.x),
            sig(row.r),
            sig(row.fidelity.mean),
            sig(row.fidelity.std_error),
            sig(row.efficiency.mean),
            sig(row.efficiency.std_error),
            sig(row.efficiency_closed),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_csv<W: Write>(header: &[&str], rows: &[Vec<f64>], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| sig(*v)))?;
    }
    w.flush()?;
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// Line chart of average fidelity and efficiency against the coupling ratio.
pub fn sweep_svg(table: &SweepTable) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| r.x).collect();
    let (x0, x1) = match (xs.first(), xs.last()) {
        (Some(a), Some(b)) if b > a => (*a, *b),
        (Some(a), _) => (*a - 0.5, *a + 0.5),
        _ => (0.0, 1.0),
    };
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - y.clamp(0.0, 1.0) * (HEIGHT - 2.0 * MARGIN);
    let path = |ys: Vec<f64>| {
        xs.iter()
            .zip(ys)
            .enumerate()
            .map(|(i, (x, y))| {
                format!(
                    "{}{:.2},{:.2}",
                    if i == 0 { "M" } else { " L" },
                    px(*x),
                    py(y)
                )
            })
            .collect::<String>()
    };
    let fid = path(table.rows.iter().map(|r| r.fidelity.mean).collect());
    let eff = path(table.rows.iter().map(|r| r.efficiency.mean).collect());

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let y = k as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.1}</text>"#,
            left - 6.0,
            py(y) + 4.0
        );
        let xv = x0 + (x1 - x0) * k as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#,
            px(xv),
            bottom + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">g / sqrt(kappa gamma)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">average value</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        s,
        r#"<path d="{fid}" fill="none" stroke="red" stroke-width="2"/>"#
    );
    let _ = writeln!(
        s,
        r#"<path d="{eff}" fill="none" stroke="blue" stroke-width="2" stroke-dasharray="6 4"/>"#
    );
    let lx = right - 150.0;
    let ly = bottom - 50.0;
    let _ = writeln!(
        s,
        r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="red" stroke-width="2"/><text x="{}" y="{}">fidelity</text>"#,
        lx + 30.0,
        lx + 36.0,
        ly + 4.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="blue" stroke-width="2" stroke-dasharray="6 4"/><text x="{}" y="{}">efficiency</text>"#,
        ly + 20.0,
        lx + 30.0,
        ly + 20.0,
        lx + 36.0,
        ly + 24.0
    );
    s.push_str("</svg>\n");
    s
}
