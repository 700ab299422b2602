//! Schedule tables as CSV: the first row holds plant labels after an empty
//! corner cell, every later row a DC label followed by case counts.

use prodist_core::scenario::ScheduleTable;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("table has no plant columns")]
    NoPlants,
    #[error("table has no DC rows")]
    NoDcs,
}

/// Whole case counts. The printed tables write some zeros as `0.0`, so a
/// decimal with no fractional part is accepted.
fn parse_cases(cell: &str) -> Option<u64> {
    if let Ok(n) = cell.parse::<u64>() {
        return Some(n);
    }
    let x: f64 = cell.parse().ok()?;
    (x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64).then_some(x as u64)
}

pub fn parse_table(text: &str) -> Result<ScheduleTable, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut plant_labels: Option<Vec<String>> = None;
    let mut dc_labels = Vec::new();
    let mut cases = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| TableError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let Some(plants) = &plant_labels else {
            let labels: Vec<String> = record.iter().skip(1).map(String::from).collect();
            if labels.is_empty() {
                return Err(TableError::NoPlants);
            }
            plant_labels = Some(labels);
            continue;
        };
        if record.len() != plants.len() + 1 {
            return Err(TableError::Malformed {
                line,
                message: format!(
                    "expected a label and {} entries, found {} cells",
                    plants.len(),
                    record.len()
                ),
            });
        }
        let row = record
            .iter()
            .skip(1)
            .map(|cell| {
                parse_cases(cell).ok_or_else(|| TableError::Malformed {
                    line,
                    message: format!("`{cell}` is not a whole number of cases"),
                })
            })
            .collect::<Result<Vec<u64>, _>>()?;
        dc_labels.push(record[0].to_string());
        cases.push(row);
    }

    let plant_labels = plant_labels.ok_or(TableError::NoPlants)?;
    if dc_labels.is_empty() {
        return Err(TableError::NoDcs);
    }
    Ok(ScheduleTable {
        dc_labels,
        plant_labels,
        cases,
    })
}

/// Writes `table` in the format [`parse_table`] reads.
pub fn table_to_csv(table: &ScheduleTable) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("").chain(table.plant_labels.iter().map(String::as_str));
    writer.write_record(header).expect("writing to memory");
    for (label, row) in table.dc_labels.iter().zip(&table.cases) {
        let cells = std::iter::once(label.clone()).chain(row.iter().map(u64::to_string));
        writer.write_record(cells).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}
