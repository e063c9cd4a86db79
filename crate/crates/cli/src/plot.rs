use std::collections::BTreeMap;
use std::fmt::Write;
use std::io::Read;

use gvdc::verify::ExperimentRecord;

use crate::error::{CliError, CliResult};

/// Frozen CSV header of experiment records.
pub const RECORD_COLUMNS: [&str; 10] =
    ["trial", "n", "seed", "a", "d_found", "exact", "gv", "threshold_kind", "threshold", "witness"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Histogram,
    ThresholdOverlay,
}

impl PlotKind {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "histogram" => Ok(PlotKind::Histogram),
            "threshold-overlay" => Ok(PlotKind::ThresholdOverlay),
            _ => Err(CliError::Usage(format!("unknown plot kind {s:?}; expected histogram|threshold-overlay"))),
        }
    }
}

pub fn write_records<W: std::io::Write>(out: W, records: &[ExperimentRecord]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records, rejecting any header other than [`RECORD_COLUMNS`]. An
/// empty input (no header at all) reads as no records.
pub fn read_records<R: Read>(input: R) -> CliResult<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    if headers.iter().ne(RECORD_COLUMNS.iter().copied()) {
        return Err(CliError::Usage(format!(
            "schema mismatch: expected columns {}, got {}",
            RECORD_COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for r in rdr.deserialize() {
        out.push(r.map_err(|e| CliError::Usage(format!("schema mismatch: {e}")))?);
    }
    Ok(out)
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG 1.1 drawing of the distance distribution. Output depends only on
/// the records, `kind` and `reference`.
pub fn render_svg(records: &[ExperimentRecord], kind: PlotKind, reference: &str) -> CliResult<String> {
    if let Some(r) = records.iter().find(|r| r.n != records[0].n || r.threshold != records[0].threshold) {
        return Err(CliError::Usage(format!("records mix parameter sets (trial {})", r.trial)));
    }
    let mut s = String::new();
    let title = match (records.first(), kind) {
        (None, _) => "minimum distance".to_string(),
        (Some(r), PlotKind::Histogram) => format!("minimum distance, n={}, {} codes", r.n, records.len()),
        (Some(r), PlotKind::ThresholdOverlay) => format!("Pr[d <= x], n={}, {} codes", r.n, records.len()),
    };
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, "<!-- {} -->", esc(reference)).unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, W / 2.0, esc(&title)).unwrap();
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#).unwrap();
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">d</text>"#, (x0 + x1) / 2.0, H - 12.0).unwrap();

    if records.is_empty() {
        writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle" fill="gray">no data</text>"#, (x0 + x1) / 2.0, (y0 + y1) / 2.0).unwrap();
        s.push_str("</svg>\n");
        return Ok(s);
    }

    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for r in records {
        *hist.entry(r.d_found).or_insert(0) += 1;
    }
    let gv = records[0].gv as usize;
    let line_at = records[0].threshold as usize + 1;
    let dmax = *hist.keys().next_back().unwrap();
    let xmax = dmax.max(gv).max(line_at) + 1;
    let slot = (x1 - x0) / (xmax as f64 + 1.0);
    let xpos = |d: usize| x0 + slot * (d as f64 + 0.5);

    for d in 0..=xmax {
        writeln!(s, r#"<text x="{:.2}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{d}</text>"#, xpos(d), y0 + 14.0).unwrap();
    }

    let total = records.len() as f64;
    match kind {
        PlotKind::Histogram => {
            let cmax = *hist.values().max().unwrap() as f64;
            for (frac, label) in [(0.0, "0".to_string()), (0.5, format!("{:.0}", cmax / 2.0)), (1.0, format!("{cmax:.0}"))] {
                let y = y0 - frac * (y0 - y1);
                writeln!(s, r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{label}</text>"#, x0 - 6.0, y + 3.0).unwrap();
            }
            for (&d, &c) in &hist {
                let h = (c as f64 / cmax) * (y0 - y1);
                writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"><title>d={d}: {c}</title></rect>"#,
                    xpos(d) - slot * 0.4,
                    y0 - h,
                    slot * 0.8,
                    h
                )
                .unwrap();
            }
        }
        PlotKind::ThresholdOverlay => {
            for (frac, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
                let y = y0 - frac * (y0 - y1);
                writeln!(s, r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{label}</text>"#, x0 - 6.0, y + 3.0).unwrap();
            }
            let mut pts = Vec::new();
            let mut acc = 0u64;
            for d in 0..=xmax {
                acc += hist.get(&d).copied().unwrap_or(0);
                let y = y0 - (acc as f64 / total) * (y0 - y1);
                pts.push(format!("{:.2},{:.2} {:.2},{:.2}", xpos(d) - slot / 2.0, y, xpos(d) + slot / 2.0, y));
            }
            writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, pts.join(" ")).unwrap();
            let below = records.iter().filter(|r| r.d_found < line_at).count() as f64 / total;
            writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">Pr[d &lt;= {}] = {:.4}</text>"#, x1, y1 + 12.0, line_at - 1, below).unwrap();
        }
    }

    let kind_label = &records[0].threshold_kind;
    for (d, color, label) in [(gv, "green", format!("GV {gv}")), (line_at, "red", format!("{kind_label} w+1 = {line_at}"))] {
        let x = xpos(d) - slot / 2.0;
        writeln!(s, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="{color}" stroke-dasharray="4,3"/>"#).unwrap();
        let ty = if color == "green" { y1 + 12.0 } else { y1 + 26.0 };
        writeln!(s, r#"<text x="{:.2}" y="{ty}" font-family="sans-serif" font-size="10" fill="{color}">{}</text>"#, x + 3.0, esc(&label)).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(trial: u64, d: usize) -> ExperimentRecord {
        ExperimentRecord {
            trial,
            n: 13,
            seed: 0,
            a: "0x1".into(),
            d_found: d,
            exact: true,
            gv: 5,
            threshold_kind: "simple".into(),
            threshold: 4,
            witness: "0x3".into(),
        }
    }

    #[test]
    fn empty_input_draws_no_data() {
        let recs = read_records(&b""[..]).unwrap();
        let svg = render_svg(&recs, PlotKind::Histogram, "ref").unwrap();
        assert!(svg.contains("no data"));
        assert!(svg.ends_with("</svg>\n"));
        let header_only = format!("{}\n", RECORD_COLUMNS.join(","));
        assert!(read_records(header_only.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn round_trip_and_schema() {
        let recs = vec![rec(0, 4), rec(1, 6)];
        let mut buf = Vec::new();
        write_records(&mut buf, &recs).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("trial,n,seed,a,d_found,exact,gv,threshold_kind,threshold,witness\n"));
        assert_eq!(read_records(&buf[..]).unwrap(), recs);
        assert!(read_records(&b"trial,n\n1,2\n"[..]).is_err());
    }

    #[test]
    fn threshold_line_and_determinism() {
        let recs = vec![rec(0, 4), rec(1, 6), rec(2, 6)];
        for kind in [PlotKind::Histogram, PlotKind::ThresholdOverlay] {
            let a = render_svg(&recs, kind, "ref").unwrap();
            assert_eq!(a, render_svg(&recs, kind, "ref").unwrap());
            assert!(a.contains("simple w+1 = 5"));
        }
        let mut mixed = recs.clone();
        mixed[1].n = 11;
        assert!(render_svg(&mixed, PlotKind::Histogram, "").is_err());
    }
}
