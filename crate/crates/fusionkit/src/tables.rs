//! Reference rows for every tabulated graph and the rendering of the five
//! tables (dimensions, quantum dimensions, ranks and invariants for sl(2);
//! dimensions and orders for sl(3)), with computed values checked against
//! the reference.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::dims::{dim_report, load_fixtures, DimReport, VerticalFixture};
use crate::exactnum::{parse_expr, CycReal};
use crate::fusion::{build_fusion, FusionSystem, Kind};
use crate::graphs::{graph_by_name, read_data_file, DataError, GraphSpec, Series};
use crate::modact::{annular, frobenius_object, AnnularFamily};
use crate::modular::{invariant_for, ModularInvariant};
use crate::qdims::{order_report, OrderReport};

pub const REFERENCE_FILE: &str = "fixtures/reference.json";
const UNKNOWN: &str = "unknown";

/// Integer reference cell: a value or the `"unknown"` marker.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RefInt {
    Known(i64),
    Marker(String),
}

impl RefInt {
    pub fn known(&self) -> Option<i64> {
        match self {
            RefInt::Known(v) => Some(*v),
            RefInt::Marker(_) => None,
        }
    }
}

/// One tabulated graph.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RefRow {
    pub kind: Kind,
    pub graph: String,
    #[serde(default)]
    pub d_n: Option<Vec<i64>>,
    /// `d_n` lists only the first half and the middle entry.
    #[serde(default)]
    pub palindrome: bool,
    /// (r_E, r_A, r_O).
    #[serde(default)]
    pub ranks: Option<[i64; 3]>,
    #[serde(default)]
    pub d_h: Option<RefInt>,
    #[serde(default)]
    pub d_b: Option<RefInt>,
    #[serde(default)]
    pub order_e: Option<String>,
    #[serde(default)]
    pub order_quotient: Option<String>,
    #[serde(default)]
    pub order_j: Option<String>,
}

impl RefRow {
    pub fn full_d_n(&self) -> Option<Vec<i64>> {
        let d = self.d_n.as_ref()?;
        if !self.palindrome {
            return Some(d.clone());
        }
        let mut out = d.clone();
        out.extend(d.iter().rev().skip(1));
        Some(out)
    }
}

pub fn load_reference() -> Result<Vec<RefRow>, DataError> {
    let text = read_data_file(REFERENCE_FILE)?;
    serde_json::from_str(&text).map_err(|e| DataError::Io(REFERENCE_FILE.into(), e.to_string()))
}

/// A reference order: exact, a decimal known to its last digit, or unknown.
#[derive(Clone, Debug)]
pub enum RefValue {
    Exact(CycReal),
    Approx { value: f64, tol: f64 },
    Unknown,
}

impl RefValue {
    /// Parse an expression in the field of `sys`; `|A|` stands for the order
    /// of A_k at the same level.
    pub fn parse(s: &str, sys: &FusionSystem) -> Option<RefValue> {
        if s == UNKNOWN {
            return Some(RefValue::Unknown);
        }
        let text = s.replace("|A|", &format!("({})", sys.order().to_bpoly()));
        if let Ok(v) = parse_expr(&text, sys.kappa) {
            return Some(RefValue::Exact(v));
        }
        let value: f64 = s.parse().ok()?;
        let digits = s.split_once('.').map_or(0, |(_, f)| f.len());
        Some(RefValue::Approx { value, tol: 10f64.powi(-(digits as i32)) })
    }

    /// `None` when the reference is unknown.
    pub fn matches(&self, x: &CycReal) -> Option<bool> {
        match self {
            RefValue::Exact(v) => Some(v == x),
            RefValue::Approx { value, tol } => Some((x.to_f64() - value).abs() <= *tol),
            RefValue::Unknown => None,
        }
    }

    pub fn display(&self) -> String {
        match self {
            RefValue::Exact(v) => render_exact(v),
            RefValue::Approx { value, .. } => value.to_string(),
            RefValue::Unknown => "[unknown]".into(),
        }
    }
}

/// Exact form followed by a 6-digit decimal when the value is irrational.
pub fn render_exact(x: &CycReal) -> String {
    match x.as_rational() {
        Some(q) if q.is_integer() => q.numer().to_string(),
        _ => format!("{} ≈ {}", x.to_exact_string(), x.to_decimal(6)),
    }
}

/// Trial-division factorization, e.g. `2^3·5·31`.
pub fn factorize(n: &BigInt) -> String {
    let mut n = n.clone();
    if n <= BigInt::from(1) {
        return n.to_string();
    }
    let mut parts = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p) == BigInt::from(0) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            parts.push(if e == 1 { p.to_string() } else { format!("{p}^{e}") });
        }
        p += 1;
    }
    if n > BigInt::from(1) {
        parts.push(n.to_string());
    }
    parts.join("·")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl std::str::FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim_start_matches("table") {
            "1" => Ok(TableId::T1),
            "2" => Ok(TableId::T2),
            "3" => Ok(TableId::T3),
            "4" => Ok(TableId::T4),
            "5" => Ok(TableId::T5),
            _ => Err(format!("unknown table {s:?}; expected table1 … table5")),
        }
    }
}

impl TableId {
    pub fn kind(self) -> Kind {
        match self {
            TableId::T1 | TableId::T2 | TableId::T3 => Kind::Sl2,
            TableId::T4 | TableId::T5 => Kind::Sl3,
        }
    }

    fn title(self) -> &'static str {
        match self {
            TableId::T1 => "sl(2): horizontal, vertical and bialgebra dimensions",
            TableId::T2 => "sl(2): quantum dimensions and orders",
            TableId::T3 => "sl(2): ranks, invariants and algebra objects",
            TableId::T4 => "sl(3): A, D and conjugate series",
            TableId::T5 => "sl(3): exceptional cases",
        }
    }

    fn columns(self) -> Vec<&'static str> {
        match self {
            TableId::T1 => vec!["graph", "k", "d_n", "d_H", "d_V - d_H", "d_B", "d_B factors", "d_B^ = d_B"],
            TableId::T2 => vec!["graph", "k", "induction F", "q-dims", "|E|", "|A/E|", "|J|"],
            TableId::T3 => vec!["graph", "kappa", "r_E", "r_A", "r_O", "Z", "F"],
            TableId::T4 | TableId::T5 => {
                vec!["graph", "kappa", "r_E", "r_A", "r_O", "d_H", "d_V - d_H", "d_B", "|E|", "|A/E|", "|J|"]
            }
        }
    }

    fn includes(self, row: &RefRow) -> bool {
        if row.kind != self.kind() {
            return false;
        }
        let exceptional = row.graph.starts_with('E') || row.graph.starts_with("D_9^t");
        match self {
            TableId::T1 | TableId::T3 => true,
            TableId::T2 => row.order_e.is_some(),
            TableId::T4 => !exceptional,
            TableId::T5 => exceptional,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub graph: String,
    pub cells: Vec<String>,
    /// Cells whose computed value disagrees with the reference.
    pub mismatches: Vec<String>,
    pub unavailable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub id: TableId,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Md,
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}; expected md, csv, json or text")),
        }
    }
}

/// Everything computed for one graph.
pub struct GraphData {
    pub graph: GraphSpec,
    pub sys: FusionSystem,
    pub fam: AnnularFamily,
    pub inv: ModularInvariant,
    pub dims: DimReport,
    pub orders: OrderReport,
}

pub fn graph_data(g: GraphSpec, fixtures: &[VerticalFixture]) -> Result<GraphData, String> {
    let sys = build_fusion(g.kind, g.level).map_err(|e| e.to_string())?;
    let fam = annular(&sys, &g).map_err(|e| e.to_string())?;
    let inv = invariant_for(&g).map_err(|e| e.to_string())?;
    let dims = dim_report(&fam).with_fixture(fixtures);
    let orders = order_report(&fam, &sys, &inv, g.self_fusion);
    Ok(GraphData { graph: g, sys, fam, inv, dims, orders })
}

/// Expected (r_E, r_A, r_O) for the sl(2) families.
pub fn sl2_ranks(series: Series, k: u32) -> Option<[i64; 3]> {
    let k = i64::from(k);
    Some(match series {
        Series::A => [k + 1, k + 1, k + 1],
        Series::DEven => [k / 2 + 2, k + 1, k + 4],
        Series::DOdd => [k / 2 + 2, k + 1, k + 1],
        Series::E6 => [6, 11, 12],
        Series::E7 => [7, 17, 17],
        Series::E8 => [8, 29, 32],
        _ => return None,
    })
}

struct RowBuilder {
    cells: Vec<String>,
    mismatches: Vec<String>,
}

impl RowBuilder {
    fn push(&mut self, s: impl Into<String>) {
        self.cells.push(s.into());
    }

    /// Computed value, with the expected one appended on mismatch.
    fn compare(&mut self, column: &str, shown: String, ok: Option<bool>, expected: impl FnOnce() -> String) {
        if ok == Some(false) {
            let e = expected();
            self.mismatches.push(format!("{column}: computed {shown}, reference {e}"));
            self.cells.push(format!("{shown} [expected {e}]"));
        } else {
            self.cells.push(shown);
        }
    }

    fn order(&mut self, column: &str, x: Option<&CycReal>, reference: Option<&str>, sys: &FusionSystem) {
        let Some(x) = x else {
            let marker = match reference.map(|r| RefValue::parse(r, sys)) {
                Some(Some(RefValue::Unknown)) => "[unknown]",
                _ => "n/a",
            };
            self.push(marker);
            return;
        };
        let parsed = reference.and_then(|r| RefValue::parse(r, sys));
        let ok = parsed.as_ref().and_then(|p| p.matches(x));
        self.compare(column, render_exact(x), ok, || parsed.map(|p| p.display()).unwrap_or_default());
    }
}

fn list(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn object_string(obj: &[(crate::fusion::Irrep, u32)]) -> String {
    let parts: Vec<String> =
        obj.iter().map(|(w, c)| if *c == 1 { format!("λ{w}") } else { format!("{c}λ{w}") }).collect();
    parts.join(" ⊕ ")
}

fn int_cell(b: &mut RowBuilder, column: &str, x: &BigInt, reference: Option<&RefInt>) {
    let ok = reference.and_then(RefInt::known).map(|r| BigInt::from(r) == *x);
    b.compare(column, x.to_string(), ok, || reference.and_then(RefInt::known).unwrap_or_default().to_string());
}

fn gap_cell(b: &mut RowBuilder, d: &DimReport) {
    match d.gap_fixture {
        None => b.push("[unknown]"),
        Some(g) => {
            let ok = d.d_v.as_ref().map(|v| v - &d.d_h == BigInt::from(g));
            b.compare("d_V - d_H", format!("{g} [fixture]"), ok, || {
                format!("d_V - d_H = {}", d.d_v.as_ref().map(|v| v - &d.d_h).unwrap_or_default())
            });
        }
    }
}

fn ranks_cells(b: &mut RowBuilder, gd: &GraphData, expected: Option<[i64; 3]>) {
    let got = [gd.inv.trace(), gd.sys.rank() as i64, gd.inv.trace_zzt()];
    for (i, name) in ["r_E", "r_A", "r_O"].iter().enumerate() {
        let ok = expected.map(|e| e[i] == got[i]);
        b.compare(name, got[i].to_string(), ok, || expected.map(|e| e[i]).unwrap_or_default().to_string());
    }
}

fn build_row(id: TableId, gd: &GraphData, reference: Option<&RefRow>) -> TableRow {
    let mut b = RowBuilder { cells: vec![gd.graph.name.clone()], mismatches: vec![] };
    let d = &gd.dims;
    let o = &gd.orders;
    let sys = &gd.sys;
    match id {
        TableId::T1 => {
            b.push(gd.graph.level.to_string());
            let dn = d.d_n_values();
            let want = reference.and_then(RefRow::full_d_n);
            b.compare("d_n", list(&dn), want.as_ref().map(|w| *w == dn), || list(&want.clone().unwrap_or_default()));
            int_cell(&mut b, "d_H", &d.d_h, reference.and_then(|r| r.d_h.as_ref()));
            gap_cell(&mut b, d);
            int_cell(&mut b, "d_B", &d.d_b, reference.and_then(|r| r.d_b.as_ref()));
            b.push(factorize(&d.d_b));
            match &d.d_b_hat {
                Some(h) => b.compare("d_B^", format!("{h} [fixture]"), Some(*h == d.d_b), || d.d_b.to_string()),
                None => b.push("[fixture unavailable]"),
            }
        }
        TableId::T2 => {
            b.push(gd.graph.level.to_string());
            b.push(object_string(&frobenius_object(&gd.fam)));
            let mu: Vec<String> = o.mu.iter().map(|m| m.to_exact_string()).collect();
            b.push(mu.join(", "));
            b.order("|E|", Some(&o.order_e), reference.and_then(|r| r.order_e.as_deref()), sys);
            b.order("|A/E|", Some(&o.order_quotient), reference.and_then(|r| r.order_quotient.as_deref()), sys);
            j_cell(&mut b, gd, reference);
        }
        TableId::T3 => {
            b.push(gd.graph.kappa().to_string());
            ranks_cells(&mut b, gd, sl2_ranks(gd.graph.series, gd.graph.level));
            b.push(gd.inv.presentation());
            b.push(object_string(&frobenius_object(&gd.fam)));
        }
        TableId::T4 | TableId::T5 => {
            b.push(gd.graph.kappa().to_string());
            ranks_cells(&mut b, gd, reference.and_then(|r| r.ranks));
            int_cell(&mut b, "d_H", &d.d_h, reference.and_then(|r| r.d_h.as_ref()));
            gap_cell(&mut b, d);
            int_cell(&mut b, "d_B", &d.d_b, reference.and_then(|r| r.d_b.as_ref()));
            b.order("|E|", Some(&o.order_e), reference.and_then(|r| r.order_e.as_deref()), sys);
            b.order("|A/E|", Some(&o.order_quotient), reference.and_then(|r| r.order_quotient.as_deref()), sys);
            j_cell(&mut b, gd, reference);
        }
    }
    TableRow { graph: gd.graph.name.clone(), cells: b.cells, mismatches: b.mismatches, unavailable: false }
}

fn j_cell(b: &mut RowBuilder, gd: &GraphData, reference: Option<&RefRow>) {
    let o = &gd.orders;
    if gd.graph.self_fusion && o.order_j.is_none() {
        b.push("[undetermined]");
        return;
    }
    let r = if gd.graph.self_fusion { reference.and_then(|r| r.order_j.as_deref()) } else { None };
    b.order("|J|", o.order_j.as_ref(), r, &gd.sys);
}

fn unavailable_row(id: TableId, graph: &str) -> TableRow {
    let n = id.columns().len();
    let mut cells = vec![graph.to_string()];
    cells.extend(std::iter::repeat("[unavailable]".to_string()).take(n - 1));
    TableRow { graph: graph.to_string(), cells, mismatches: vec![], unavailable: true }
}

/// Graph names a table covers, in order.
pub fn table_graphs(id: TableId, reference: &[RefRow]) -> Vec<String> {
    reference.iter().filter(|r| id.includes(r)).map(|r| r.graph.clone()).collect()
}

/// Build a table; `graph` restricts it to one row (any catalog graph).
pub fn build_table(id: TableId, graph: Option<&str>) -> Result<Table, DataError> {
    let reference = load_reference()?;
    let fixtures = load_fixtures()?;
    let names = match graph {
        Some(g) => vec![g.to_string()],
        None => table_graphs(id, &reference),
    };
    let kind = id.kind();
    let rows = crate::par::map(&names, |name| {
        let r = reference.iter().find(|r| r.kind == kind && r.graph == *name);
        match graph_by_name(kind, name).map_err(|e| e.to_string()).and_then(|g| graph_data(g, &fixtures)) {
            Ok(gd) => build_row(id, &gd, r),
            Err(_) => unavailable_row(id, name),
        }
    });
    Ok(Table { id, columns: id.columns().iter().map(ToString::to_string).collect(), rows })
}

impl Table {
    pub fn mismatches(&self) -> impl Iterator<Item = (&str, &str)> {
        self.rows.iter().flat_map(|r| r.mismatches.iter().map(move |m| (r.graph.as_str(), m.as_str())))
    }

    pub fn has_unavailable(&self) -> bool {
        self.rows.iter().any(|r| r.unavailable)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Md => self.to_md(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    fn to_md(&self) -> String {
        let mut out = format!("### {}\n\n| {} |\n|", self.id.title(), self.columns.join(" | "));
        out.push_str(&"---|".repeat(self.columns.len()));
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.cells.iter().map(|c| c.replace('|', "\\|")).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }

    fn to_csv(&self) -> String {
        let quote = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::new();
        let head: Vec<String> = self.columns.iter().map(|c| quote(c)).collect();
        out.push_str(&head.join(","));
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.cells.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(&r.cells) {
                    m.insert(c.clone(), Value::String(v.clone()));
                }
                m.insert("mismatches".into(), json!(r.mismatches));
                Value::Object(m)
            })
            .collect();
        let doc = json!({ "table": self.id.title(), "columns": self.columns, "rows": rows });
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    fn to_text(&self) -> String {
        let n = self.columns.len();
        let width = |i: usize| {
            self.rows
                .iter()
                .map(|r| r.cells[i].chars().count())
                .chain(std::iter::once(self.columns[i].chars().count()))
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = (0..n).map(width).collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = format!("{}\n", self.id.title());
        out.push_str(&line(&self.columns));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(&r.cells));
            out.push('\n');
        }
        out
    }
}
