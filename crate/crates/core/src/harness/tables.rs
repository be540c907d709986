//! Reproduction of the two verdict tables: the independence schemes against
//! the axioms, and the pool schemes in common use against the axioms.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{check_instances, AxiomId, AxiomVerdict, CheckBudget, CheckError};
use crate::schemes::Scheme;

/// Column order of both tables.
pub const TABLE_COLUMNS: [AxiomId; 6] = [
    AxiomId::FixedTotalReward,
    AxiomId::RelativeRedistribution,
    AxiomId::AbsoluteRedistribution,
    AxiomId::RoundBasedRewards,
    AxiomId::BudgetLimit,
    AxiomId::Ordinality,
];

const COLUMN_LABELS: [&str; 6] = ["FTR", "Rel", "Abs", "RB", "Bud", "Ord"];

/// Rows of the independence table: label, scheme, expected cells.
pub const TABLE1_ROWS: [(&str, &str, &str); 6] = [
    ("Scheme 1", "scheme1", "-+++++"),
    ("Scheme 2", "scheme2:lambda=1/2", "+-++++"),
    ("Scheme 3", "scheme3", "++-+++"),
    ("Scheme 4", "scheme4", "+++-++"),
    ("Scheme 5", "scheme5", "++++-+"),
    ("Scheme 6", "scheme6:t=1/2", "+++++-"),
];

/// Rows of the pool-scheme table: label, scheme, expected cells.
pub const TABLE2_ROWS: [(&str, &str, &str); 6] = [
    ("PPS", "pps:d=3", "-+++-+"),
    ("PPLNS", "pplns:n=3", "-----+"),
    ("Geometric", "geometric:r=2", "-+-+++"),
    ("Constrained Geometric", "cgeometric:r=2", "++-+++"),
    ("IC", "ic:d=3", "+--+++"),
    ("Slush", "slush:lambda=1200", "------"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Plus,
    Minus,
}

impl Cell {
    fn parse(c: char) -> Cell {
        match c {
            '+' => Cell::Plus,
            '-' => Cell::Minus,
            other => panic!("bad table cell {other:?}"),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Cell::Plus => '+',
            Cell::Minus => '-',
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_char(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub axiom: AxiomId,
    pub expected: Cell,
    pub observed: Cell,
    /// For "-" cells: whether the witness re-verifies through the
    /// per-share evaluation path.
    pub witness_replays: Option<bool>,
    pub verdict: AxiomVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub scheme: String,
    pub cells: Vec<CellResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MismatchedCell {
    pub row: String,
    pub axiom: AxiomId,
    pub expected: Cell,
    pub observed: Cell,
}

impl fmt::Display for MismatchedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / {}: expected {}, observed {}",
            self.row, self.axiom, self.expected, self.observed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub columns: Vec<AxiomId>,
    pub rows: Vec<TableRow>,
    pub mismatches: Vec<MismatchedCell>,
    /// Rows and axioms of "-" cells whose witness failed to replay.
    pub unreplayed: Vec<(String, AxiomId)>,
}

impl TableReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty() && self.unreplayed.is_empty()
    }

    pub fn grid(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|row| row.cells.iter().map(|c| c.observed.symbol()).collect())
            .collect()
    }

    /// Plain-text grid. A cell that disagrees with the expected table is
    /// followed by `!`.
    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(8);
        let mut out = String::new();
        let _ = write!(out, "{:width$}", format!("Table {}", self.table));
        for label in COLUMN_LABELS {
            let _ = write!(out, " {label:>4}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:width$}", row.label);
            for cell in &row.cells {
                let mark = if cell.expected == cell.observed { ' ' } else { '!' };
                let _ = write!(out, " {:>3}{mark}", cell.observed.symbol());
            }
            out.push('\n');
        }
        if self.matches() {
            out.push_str("all cells match\n");
        } else {
            for m in &self.mismatches {
                let _ = writeln!(out, "mismatch: {m}");
            }
            for (row, axiom) in &self.unreplayed {
                let _ = writeln!(out, "witness does not replay: {row} / {axiom}");
            }
        }
        out
    }
}

fn reproduce(table: u8, rows: &[(&str, &str, &str)], budget: &CheckBudget) -> Result<TableReport, CheckError> {
    budget.validate()?;
    let instances = budget.instances();
    let schemes: Vec<Scheme> = rows
        .iter()
        .map(|(_, spec, _)| Scheme::parse_spec(spec))
        .collect::<Result<_, _>>()?;
    let cells: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|r| (0..TABLE_COLUMNS.len()).map(move |c| (r, c)))
        .collect();
    let results: Vec<Result<CellResult, CheckError>> = cells
        .par_iter()
        .map(|&(r, c)| {
            let axiom = TABLE_COLUMNS[c];
            let scheme = &schemes[r];
            let verdict = check_instances(axiom, scheme, &instances, budget.tolerance)?;
            let witness_replays = match verdict.counterexample() {
                Some(cx) => Some(cx.replay(scheme, budget.tolerance)?.confirms()),
                None => None,
            };
            Ok(CellResult {
                axiom,
                expected: Cell::parse(rows[r].2.as_bytes()[c] as char),
                observed: if verdict.is_fail() { Cell::Minus } else { Cell::Plus },
                witness_replays,
                verdict,
            })
        })
        .collect();

    let mut results = results.into_iter();
    let mut report = TableReport {
        table,
        columns: TABLE_COLUMNS.to_vec(),
        rows: Vec::new(),
        mismatches: Vec::new(),
        unreplayed: Vec::new(),
    };
    for (label, _, _) in rows {
        let mut row = TableRow {
            label: label.to_string(),
            scheme: schemes[report.rows.len()].to_string(),
            cells: Vec::new(),
        };
        for _ in TABLE_COLUMNS {
            let cell = results.next().expect("one result per cell")?;
            if cell.expected != cell.observed {
                report.mismatches.push(MismatchedCell {
                    row: label.to_string(),
                    axiom: cell.axiom,
                    expected: cell.expected,
                    observed: cell.observed,
                });
            }
            if cell.witness_replays == Some(false) {
                report.unreplayed.push((label.to_string(), cell.axiom));
            }
            row.cells.push(cell);
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Independence schemes 1 to 6; each should fail exactly its own axiom.
pub fn reproduce_table1(budget: &CheckBudget) -> Result<TableReport, CheckError> {
    reproduce(1, &TABLE1_ROWS, budget)
}

/// PPS, PPLNS, geometric, constrained geometric, IC and Slush.
pub fn reproduce_table2(budget: &CheckBudget) -> Result<TableReport, CheckError> {
    reproduce(2, &TABLE2_ROWS, budget)
}
