use std::collections::BTreeSet;
use std::fmt::Write as _;

use fano_index2::basket::Basket;
use fano_index2::classifier::{
    degree_extremes, enumerate_candidates, genus_histogram, summarize, Candidate, CandidateError, CandidateRecord,
};
use fano_index2::genrings::{
    analyse, codim_histogram, embedded_tables, load_tables_from_path, verify_table_entry, FixtureError, TableEntry,
    TableReport, K3_COMPARISON_CODIM_COUNTS,
};
use fano_index2::rr::{kawamata_ok, RrContext, RrError, Stability};
use serde::Serialize;
use serde_json::json;

use crate::{Cli, Command, Failure, Format, HistogramBy, Report, MIN_VERIFY_CUTOFF};

type Outcome = Result<(Report, Result<(), Failure>), Failure>;

const SERIES_PREVIEW: usize = 16;

pub fn run(cli: &Cli) -> Outcome {
    let cutoff = cli.cutoff as usize;
    match &cli.command {
        Command::Enumerate { stable } => {
            let all = enumerate_candidates(cutoff);
            let chosen: Vec<Candidate> = all.into_iter().filter(|c| !stable || c.is_stable()).collect();
            listing(cli.format, &chosen, enumeration_footer(&chosen))
        }
        Command::K3Obstructions => {
            let chosen: Vec<Candidate> = enumerate_candidates(cutoff)
                .into_iter()
                .filter(|c| c.k3_obstructed)
                .collect();
            let unstable = chosen.iter().filter(|c| !c.is_stable()).count();
            listing(
                cli.format,
                &chosen,
                format!("{} K3-obstructed, {unstable} unstable", chosen.len()),
            )
        }
        Command::Inspect { basket, genus } => inspect(cli.format, basket, *genus, cutoff),
        Command::VerifyTables { table, fixture } => {
            if cutoff < MIN_VERIFY_CUTOFF {
                return Err(Failure::Usage(format!(
                    "--cutoff must be at least {MIN_VERIFY_CUTOFF} for verify-tables"
                )));
            }
            let entries = match fixture {
                Some(path) => load_tables_from_path(path).map_err(|e| match e {
                    FixtureError::Io(io) => Failure::Io(format!("{}: {io}", path.display())),
                    other => Failure::Usage(format!("{}: {other}", path.display())),
                })?,
                None => embedded_tables(),
            };
            verify_tables(cli.format, &entries, *table, cutoff)
        }
        Command::Histogram { by: HistogramBy::Genus } => genus_report(cli.format, cutoff),
        Command::Histogram { by: HistogramBy::Codim } => codim_report(cli.format, cutoff),
    }
}

fn ok(body: String, footer: Option<String>) -> Outcome {
    Ok((Report { body, footer }, Ok(())))
}

fn json_body<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// A JSON array with one compact record per line.
fn json_lines<T: Serialize>(values: &[T]) -> String {
    let lines: Vec<String> = values
        .iter()
        .map(|v| serde_json::to_string(v).expect("record serializes"))
        .collect();
    if lines.is_empty() {
        "[]\n".into()
    } else {
        format!("[\n{}\n]\n", lines.join(",\n"))
    }
}

fn csv_body<I, R>(header: &[&str], rows: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn basket_label(b: &Basket) -> String {
    if b.is_empty() {
        "(none)".into()
    } else {
        b.to_string()
    }
}

fn enumeration_footer(cs: &[Candidate]) -> String {
    let s = summarize(cs);
    format!(
        "{} candidates, {} stable, {} K3-obstructed",
        s.total, s.stable, s.k3_obstructed
    )
}

fn listing(format: Format, cs: &[Candidate], footer: String) -> Outcome {
    let records: Vec<CandidateRecord> = cs.iter().map(CandidateRecord::from).collect();
    let body = match format {
        Format::Json => json_lines(&records),
        Format::Csv => csv_body(
            &CandidateRecord::COLUMNS,
            records.iter().map(CandidateRecord::csv_fields),
        )?,
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                writeln!(
                    out,
                    "{:<28} g={:<2} A^3={:<8} Ac2/12={:<8} {:<8} h0(A)={} h0(2A)={}{}",
                    basket_label(&r.basket),
                    r.genus,
                    r.a3,
                    r.acz12,
                    if r.stable { "stable" } else { "unstable" },
                    r.h0_a,
                    r.h0_2a,
                    if r.k3_obstructed { " K3-obstructed" } else { "" },
                )
                .unwrap();
            }
            out
        }
    };
    ok(body, Some(footer))
}

fn rr_failure(e: RrError) -> Failure {
    match e {
        RrError::BoundViolated { .. } | RrError::Polarisation { .. } => Failure::InadmissibleBasket(e.to_string()),
        RrError::NonpositiveDegree { .. } => Failure::NonpositiveDegree(e.to_string()),
        RrError::GenusBelowMinimum { .. } => Failure::GenusBelowMinimum(e.to_string()),
    }
}

fn stability_name(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Rejected => "rejected",
    }
}

fn inspect(format: Format, basket_text: &str, genus: i64, cutoff: usize) -> Outcome {
    let basket: Basket = basket_text
        .parse()
        .map_err(|e| Failure::Usage(format!("basket: {e}")))?;
    let ctx = RrContext::new(basket.clone()).map_err(rr_failure)?;
    let a3 = ctx.degree(genus).map_err(rr_failure)?;
    let stability = kawamata_ok(&a3, &ctx.acz12);
    let series = ctx.series(&a3, cutoff);
    let coeffs = series.integer_coeffs_i64().map_err(|e| Failure::Io(e.to_string()))?;
    let model = analyse(&basket, genus, cutoff);

    let body = match format {
        Format::Json => {
            let model_json = match &model {
                Ok(m) => json!({
                    "weights": m.weights,
                    "numerator": m.numerator,
                    "numerator_text": m.numerator.to_string(),
                    "codim": m.codim,
                    "codim_is_lower_bound": m.codim_is_lower_bound(),
                    "seeded": m.seeded,
                    "shape": m.shape.name(),
                    "shape_degrees": m.shape,
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            json_body(&json!({
                "basket": basket,
                "genus": genus,
                "A3": a3,
                "Ac2_over_12": ctx.acz12,
                "stability": stability_name(stability),
                "k3_obstructed": basket.singular_rank() >= fano_index2::classifier::K3_RANK_LIMIT,
                "series": coeffs,
                "model": model_json,
            }))
        }
        Format::Csv => {
            let c = Candidate::build(&basket, genus, cutoff).map_err(|e| match e {
                CandidateError::Rr(e) => rr_failure(e),
                other => Failure::DegreeTooLarge(other.to_string()),
            })?;
            let record = CandidateRecord::from(&c);
            csv_body(&CandidateRecord::COLUMNS, [record.csv_fields()])?
        }
        Format::Text => {
            let mut out = String::new();
            let preview: Vec<String> = coeffs.iter().take(SERIES_PREVIEW).map(i64::to_string).collect();
            writeln!(out, "basket      {}", basket_label(&basket)).unwrap();
            writeln!(out, "genus       {genus}").unwrap();
            writeln!(out, "A^3         {a3}").unwrap();
            writeln!(out, "Ac2/12      {}", ctx.acz12).unwrap();
            writeln!(out, "stability   {}", stability_name(stability)).unwrap();
            writeln!(out, "series      {}, ...", preview.join(", ")).unwrap();
            match &model {
                Ok(m) => {
                    let ws: Vec<String> = m.weights.iter().map(u32::to_string).collect();
                    writeln!(out, "weights     {}", ws.join(",")).unwrap();
                    writeln!(out, "numerator   {}", m.numerator).unwrap();
                    if m.codim_is_lower_bound() {
                        writeln!(
                            out,
                            "codim       >= {} (added generators in degrees {:?})",
                            m.codim, m.seeded
                        )
                        .unwrap();
                    } else {
                        writeln!(out, "codim       {}", m.codim).unwrap();
                    }
                    writeln!(out, "shape       {}", m.shape).unwrap();
                }
                Err(e) => writeln!(out, "model       {e}").unwrap(),
            }
            out
        }
    };
    ok(body, None)
}

fn verify_tables(format: Format, entries: &[TableEntry], only: Option<u8>, cutoff: usize) -> Outcome {
    let chosen: Vec<&TableEntry> = entries.iter().filter(|e| only.is_none_or(|t| e.table == t)).collect();
    let reports: Vec<TableReport> = chosen.iter().map(|e| verify_table_entry(e, cutoff)).collect();
    let tables: BTreeSet<u8> = chosen.iter().map(|e| e.table).collect();
    let summary: Vec<String> = tables
        .iter()
        .map(|&t| {
            let of_table = reports.iter().filter(|r| r.table == t);
            let total = of_table.clone().count();
            let passed = of_table.filter(|r| r.passed()).count();
            format!("Table{t} {passed}/{total}")
        })
        .collect();
    let failures: Vec<&TableReport> = reports.iter().filter(|r| !r.passed()).collect();

    let body = match format {
        Format::Json => json_body(&reports),
        Format::Csv => csv_body(
            &["table", "name", "weights", "basket", "passed", "failed_checks"],
            reports.iter().map(|r| {
                let weights: Vec<String> = r.weights.iter().map(u32::to_string).collect();
                let failed: Vec<String> = r.failed_checks().iter().map(ToString::to_string).collect();
                [
                    r.table.to_string(),
                    r.name.clone(),
                    weights.join(" "),
                    r.basket.clone(),
                    r.passed().to_string(),
                    failed.join(" "),
                ]
            }),
        )?,
        Format::Text => {
            let mut out = String::new();
            for r in &failures {
                for c in r.checks.iter().filter(|c| !c.passed) {
                    writeln!(
                        out,
                        "FAIL Table{} {} P{:?} basket {}: {}: {}",
                        r.table,
                        r.name,
                        r.weights,
                        basket_text(&r.basket),
                        c.check,
                        c.detail
                    )
                    .unwrap();
                }
            }
            out
        }
    };
    let verdict = if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification)
    };
    Ok((
        Report {
            body,
            footer: Some(summary.join(" ")),
        },
        verdict,
    ))
}

fn basket_text(b: &str) -> &str {
    if b.is_empty() {
        "(none)"
    } else {
        b
    }
}

#[derive(Serialize)]
struct GenusLine {
    genus: i64,
    total: usize,
    unstable: usize,
    min_a3: String,
    max_a3: String,
}

fn genus_report(format: Format, cutoff: usize) -> Outcome {
    let all = enumerate_candidates(cutoff);
    let lines: Vec<GenusLine> = genus_histogram(&all)
        .into_iter()
        .zip(degree_extremes(&all))
        .map(|(h, d)| GenusLine {
            genus: h.genus,
            total: h.total,
            unstable: h.unstable,
            min_a3: d.min.to_string(),
            max_a3: d.max.to_string(),
        })
        .collect();
    let total: usize = lines.iter().map(|l| l.total).sum();
    let unstable: usize = lines.iter().map(|l| l.unstable).sum();
    let body = match format {
        Format::Json => json_body(&lines),
        Format::Csv => csv_body(
            &["genus", "total", "unstable", "min_A3", "max_A3"],
            lines.iter().map(|l| {
                [
                    l.genus.to_string(),
                    l.total.to_string(),
                    l.unstable.to_string(),
                    l.min_a3.clone(),
                    l.max_a3.clone(),
                ]
            }),
        )?,
        Format::Text => {
            let mut out = format!(
                "{:>5} {:>6} {:>9} {:>8} {:>8}\n",
                "genus", "total", "unstable", "min A^3", "max A^3"
            );
            for l in &lines {
                writeln!(
                    out,
                    "{:>5} {:>6} {:>9} {:>8} {:>8}",
                    l.genus, l.total, l.unstable, l.min_a3, l.max_a3
                )
                .unwrap();
            }
            out
        }
    };
    ok(body, Some(format!("{total} candidates, {unstable} unstable")))
}

#[derive(Serialize)]
struct CodimLine {
    codim: i64,
    estimated: usize,
    estimated_unstable: usize,
    reference: usize,
    reference_unstable: usize,
}

fn codim_report(format: Format, cutoff: usize) -> Outcome {
    let all = enumerate_candidates(cutoff);
    let hist = codim_histogram(&all, cutoff);
    let codims: BTreeSet<i64> = hist
        .rows
        .iter()
        .map(|r| r.codim)
        .chain(K3_COMPARISON_CODIM_COUNTS.iter().map(|r| r.0))
        .collect();
    let lines: Vec<CodimLine> = codims
        .into_iter()
        .map(|codim| {
            let ours = hist.rows.iter().find(|r| r.codim == codim);
            let theirs = K3_COMPARISON_CODIM_COUNTS.iter().find(|r| r.0 == codim);
            CodimLine {
                codim,
                estimated: ours.map_or(0, |r| r.total),
                estimated_unstable: ours.map_or(0, |r| r.unstable),
                reference: theirs.map_or(0, |r| r.1),
                reference_unstable: theirs.map_or(0, |r| r.2),
            }
        })
        .collect();
    let modelled: usize = lines.iter().map(|l| l.estimated).sum();
    let mut footer = format!("{modelled} candidates of singular rank at most 19 modelled");
    if !hist.failures.is_empty() {
        write!(footer, ", {} not modelled", hist.failures.len()).unwrap();
    }
    let body = match format {
        Format::Json => json_body(&lines),
        Format::Csv => csv_body(
            &[
                "codim",
                "estimated",
                "estimated_unstable",
                "k3_comparison",
                "k3_comparison_unstable",
            ],
            lines.iter().map(|l| {
                [
                    l.codim.to_string(),
                    l.estimated.to_string(),
                    l.estimated_unstable.to_string(),
                    l.reference.to_string(),
                    l.reference_unstable.to_string(),
                ]
            }),
        )?,
        Format::Text => {
            let mut out = format!(
                "{:>5} {:>9} {:>10}   {:>13} {:>10}\n",
                "codim", "estimated", "(unstable)", "K3 comparison", "(unstable)"
            );
            for l in &lines {
                writeln!(
                    out,
                    "{:>5} {:>9} {:>10}   {:>13} {:>10}",
                    l.codim, l.estimated, l.estimated_unstable, l.reference, l.reference_unstable
                )
                .unwrap();
            }
            out
        }
    };
    ok(body, Some(footer))
}
