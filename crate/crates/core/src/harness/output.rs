//! CSV files written by the runner and the table command.

use std::io::Write;

use super::run::AggregateResult;
use super::table::{CorruptionRow, TableRow};
use crate::bounds::BoundValue;
use crate::error::Result;

pub const REGRET_HEADER: [&str; 12] = [
    "checkpoint",
    "mean_regret",
    "stderr",
    "bound_t1_adv",
    "bound_t1_sto",
    "bound_t1_stoC",
    "bound_t2_adv",
    "bound_t2_sto",
    "bound_t2_stoC",
    "bound_t3_adv",
    "bound_t3_sto",
    "bound_t3_stoC",
];

const NA: &str = "NA";

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), num)
}

fn bound(v: &BoundValue) -> String {
    opt(v.get())
}

/// Regret and bound curves, one row per checkpoint; invalid bounds are `NA`.
pub fn write_regret_csv<W: Write>(result: &AggregateResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REGRET_HEADER)?;
    for (i, row) in result.overlay.rows.iter().enumerate() {
        let mut record = vec![
            row.checkpoint.to_string(),
            num(result.mean_regret[i]),
            num(result.stderr[i]),
        ];
        record.extend(row.columns().into_iter().map(opt));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean weights at rounds `1, 1 + stride, 1 + 2 stride, ...`.
pub fn write_weights_csv<W: Write>(result: &AggregateResult, stride: u64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["round".to_string()];
    header.extend((0..result.num_arms).map(|i| format!("w_{i}")));
    w.write_record(&header)?;
    for t in (1..=result.horizon).step_by(stride.max(1) as usize) {
        let mut record = vec![t.to_string()];
        record.extend(result.mean_weights_at(t).iter().map(|&x| num(x)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub const TABLE_HEADER: [&str; 14] = [
    "arms",
    "horizon",
    "s",
    "corruption",
    "row",
    "original_sto",
    "original_stoC",
    "refined_sto",
    "refined_stoC",
    "original_leading",
    "refined_leading",
    "leading_ratio",
    "full_ratio",
    "reference_ratio",
];

pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for r in rows {
        let row = match r.row {
            CorruptionRow::SmallC => "small_c",
            CorruptionRow::LargeC => "large_c",
        };
        w.write_record([
            r.arms.to_string(),
            r.horizon.to_string(),
            num(r.s),
            num(r.corruption),
            row.to_string(),
            bound(&r.original_self_bounding),
            bound(&r.original_large_corruption),
            bound(&r.refined_self_bounding),
            bound(&r.refined_large_corruption),
            num(r.original_leading),
            num(r.refined_leading),
            num(r.leading_ratio),
            opt(r.full_ratio),
            num(r.reference_ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}
