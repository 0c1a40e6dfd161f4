//! Named check suites over the catalog: dimension and order formulas, the
//! trigonometric identities, discriminants, rigidity and module axioms, and
//! modular splitting. Items come back in catalog order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dims::{
    closed_formula_oracle, dim_report, dv_fixture_check, inverse_cartan_sum, load_fixtures, ratio_prediction,
    sl3_block_identities, weyl_relation_check, FixtureCheck, VerticalFixture,
};
use crate::fusion::{build_fusion, Kind};
use crate::graphs::{catalog, graph_by_name, rigidity_check, tadpole, GraphSpec, SL3_EXCEPTIONAL};
use crate::modact::{annular, ModactError};
use crate::modular::{solve_splitting, verify_splitting, SplitError};
use crate::qdims::{discriminant_suite, j_sum_identity, trig_identity_check};
use crate::tables::{graph_data, load_reference, sl2_ranks, GraphData, RefRow, RefValue};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Formulas,
    Trig,
    Discriminant,
    Rigidity,
    Splitting,
    All,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "formulas" => Suite::Formulas,
            "trig" => Suite::Trig,
            "discriminant" => Suite::Discriminant,
            "rigidity" => Suite::Rigidity,
            "splitting" => Suite::Splitting,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Formulas => "formulas",
            Suite::Trig => "trig",
            Suite::Discriminant => "discriminant",
            Suite::Rigidity => "rigidity",
            Suite::Splitting => "splitting",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Both algebras when `None`.
    pub kind: Option<Kind>,
    /// Highest level; each suite has its own default.
    pub level: Option<u32>,
    pub graph: Option<String>,
    pub tol: f64,
    pub budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { kind: None, level: None, graph: None, tol: DEFAULT_TOL, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckItem {
    pub suite: Suite,
    /// Graph or level the check is about.
    pub subject: String,
    /// The identity being checked.
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "✓" } else { "✗" };
        write!(f, "[{}] {}: {} {mark}", self.suite, self.subject, self.claim)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

struct Out {
    suite: Suite,
    subject: String,
    items: Vec<CheckItem>,
}

impl Out {
    fn new(suite: Suite, subject: impl Into<String>) -> Self {
        Out { suite, subject: subject.into(), items: vec![] }
    }

    fn check(&mut self, claim: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.items.push(CheckItem {
            suite: self.suite,
            subject: self.subject.clone(),
            claim: claim.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn kinds(opts: &CheckOptions) -> Vec<Kind> {
    opts.kind.map_or_else(|| vec![Kind::Sl2, Kind::Sl3], |k| vec![k])
}

/// Graphs a suite runs over: the catalog up to `level`, plus the sl(3)
/// graphs shipped as data up to `data_level`.
fn graphs(opts: &CheckOptions, kind: Kind, level: u32, data_level: u32) -> Result<Vec<GraphSpec>, String> {
    if let Some(name) = &opts.graph {
        return Ok(graph_by_name(kind, name).map(|g| vec![g]).unwrap_or_default());
    }
    let mut out = catalog(kind, level).map_err(|e| e.to_string())?;
    if kind == Kind::Sl3 {
        for (name, lvl) in SL3_EXCEPTIONAL {
            if *lvl > level && *lvl <= data_level {
                out.push(graph_by_name(kind, name).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(out)
}

fn default_level(opts: &CheckOptions, kind: Kind, sl2: u32, sl3: u32) -> u32 {
    opts.level.unwrap_or(match kind {
        Kind::Sl2 => sl2,
        Kind::Sl3 => sl3,
    })
}

fn error_item(suite: Suite, subject: &str, e: impl fmt::Display) -> CheckItem {
    CheckItem { suite, subject: subject.into(), claim: "data available".into(), passed: false, detail: e.to_string() }
}

/// Run one suite, or every suite for `Suite::All`.
pub fn run_suite(suite: Suite, opts: &CheckOptions) -> Vec<CheckItem> {
    match suite {
        Suite::All => [Suite::Formulas, Suite::Trig, Suite::Discriminant, Suite::Rigidity, Suite::Splitting]
            .iter()
            .flat_map(|s| run_suite(*s, opts))
            .collect(),
        Suite::Formulas => formulas(opts),
        Suite::Trig => trig(opts),
        Suite::Discriminant => discriminant(opts),
        Suite::Rigidity => rigidity(opts),
        Suite::Splitting => splitting(opts),
    }
}

fn formulas(opts: &CheckOptions) -> Vec<CheckItem> {
    let (reference, fixtures) = match (load_reference(), load_fixtures()) {
        (Ok(r), Ok(f)) => (r, f),
        (Err(e), _) | (_, Err(e)) => return vec![error_item(Suite::Formulas, "fixtures", e)],
    };
    let mut items = Vec::new();
    for kind in kinds(opts) {
        let level = default_level(opts, kind, 28, 21);
        let gs = match graphs(opts, kind, level, level) {
            Ok(g) => g,
            Err(e) => {
                items.push(error_item(Suite::Formulas, &kind.to_string(), e));
                continue;
            }
        };
        let per_graph = crate::par::map(&gs, |g| formulas_for(g, &reference, &fixtures));
        items.extend(per_graph.into_iter().flatten());
        if kind == Kind::Sl3 && opts.graph.is_none() {
            for k in 1..=level.min(12) {
                let mut o = Out::new(Suite::Formulas, format!("sl3 A_{k}"));
                let sys = build_fusion(kind, k).expect("valid level");
                let r = sl3_block_identities(&sys);
                o.check("d_(pq) recurrence and d_(p,0) closed form", r.is_ok(), r.err().map(|w| format!("fails at {w}")).unwrap_or_default());
                items.extend(o.items);
            }
        }
    }
    items
}

fn formulas_for(g: &GraphSpec, reference: &[RefRow], fixtures: &[VerticalFixture]) -> Vec<CheckItem> {
    let mut o = Out::new(Suite::Formulas, format!("{} {}", g.kind, g.name));
    let gd = match graph_data(g.clone(), fixtures) {
        Ok(gd) => gd,
        Err(e) => return vec![error_item(Suite::Formulas, &o.subject, e)],
    };
    let d = &gd.dims;
    let row = reference.iter().find(|r| r.kind == g.kind && r.graph == g.name);
    if let Some(r) = row {
        if let Some(want) = r.full_d_n() {
            o.check("d_n sequence matches reference", want == d.d_n_values(), "");
        }
        if let Some(h) = r.d_h.as_ref().and_then(|x| x.known()) {
            o.check(format!("d_H = {h}"), d.d_h == BigInt::from(h), format!("computed {}", d.d_h));
        }
        if let Some(b) = r.d_b.as_ref().and_then(|x| x.known()) {
            o.check(format!("d_B = {b}"), d.d_b == BigInt::from(b), format!("computed {}", d.d_b));
        }
    }
    if let Some(p) = closed_formula_oracle(g.kind, g.series, g.level) {
        if let Some(h) = &p.d_h {
            o.check("d_H closed formula", *h == d.d_h, format!("formula {h}, computed {}", d.d_h));
        }
        if let Some(b) = &p.d_b {
            o.check("d_B closed formula", *b == d.d_b, format!("formula {b}, computed {}", d.d_b));
        }
        if !p.d_n.is_empty() {
            let bad = p.d_n.iter().find(|(w, v)| d.d_n.iter().find(|(x, _)| x == w).map(|(_, c)| c) != Some(v));
            o.check("d_n closed formula", bad.is_none(), bad.map(|(w, v)| format!("d_{w} should be {v}")).unwrap_or_default());
        }
    }
    if let Some((base, fh, fb)) = ratio_prediction(g.kind, g.series, g.level) {
        match graph_by_name(g.kind, &base).map_err(|e| e.to_string()).and_then(|b| {
            let sys = build_fusion(b.kind, b.level).map_err(|e| e.to_string())?;
            annular(&sys, &b).map_err(|e| e.to_string())
        }) {
            Ok(bf) => {
                let bd = dim_report(&bf);
                let scaled = |x: &BigInt, f: &BigRational| BigRational::from_integer(x.clone()) * f;
                let ok = scaled(&bd.d_h, &fh) == BigRational::from_integer(d.d_h.clone())
                    && scaled(&bd.d_b, &fb) == BigRational::from_integer(d.d_b.clone());
                o.check(format!("d_H, d_B = ({fh}, {fb}) × those of {base}"), ok, "");
            }
            Err(e) => o.check(format!("ratio to {base}"), false, e),
        }
    }
    if g.kind == Kind::Sl2 {
        let v = d.d_n_values();
        o.check("d_n palindromic", v.iter().eq(v.iter().rev()), "");
        let twice = inverse_cartan_sum(&gd.fam).map(|s| s * BigRational::from_integer(2.into()));
        o.check(
            "d_H = 2 Σ (A⁻¹)_ij",
            twice.as_ref() == Some(&BigRational::from_integer(d.d_h.clone())),
            twice.map(|t| format!("2ΣA⁻¹ = {t}")).unwrap_or_else(|| "A singular".into()),
        );
    }
    o.check("A·X = Λ", weyl_relation_check(&gd.fam), "");
    match dv_fixture_check(d) {
        FixtureCheck::NoFixture => {}
        FixtureCheck::Checked { d_b_matches, gap_matches } => {
            if let Some(ok) = d_b_matches {
                o.check("Σ d_x² = d_B (fixture)", ok, format!("Σ d_x² = {}", d.d_b_hat.clone().unwrap_or_default()));
            }
            if let Some(ok) = gap_matches {
                o.check("Σ d_x − d_H = tabulated gap (fixture)", ok, "");
            }
        }
    }
    modular_bookkeeping(&mut o, &gd, row);
    orders(&mut o, &gd, row);
    o.items
}

fn modular_bookkeeping(o: &mut Out, gd: &GraphData, row: Option<&RefRow>) {
    let (tr, trzz) = (gd.inv.trace(), gd.inv.trace_zzt());
    o.check("Tr Z = r_E", tr == gd.graph.rank() as i64, format!("Tr Z = {tr}, r_E = {}", gd.graph.rank()));
    let expected = match gd.graph.kind {
        Kind::Sl2 => sl2_ranks(gd.graph.series, gd.graph.level),
        Kind::Sl3 => row.and_then(|r| r.ranks),
    };
    if let Some([re, ra, ro]) = expected {
        o.check(format!("(r_E, r_A, r_O) = ({re}, {ra}, {ro})"), [tr, gd.sys.rank() as i64, trzz] == [re, ra, ro], format!("Tr ZZᵗ = {trzz}"));
    }
}

fn orders(o: &mut Out, gd: &GraphData, row: Option<&RefRow>) {
    let r = &gd.orders;
    o.check("|A/E|·|E| = |A|", r.quotient_identity(), "");
    if gd.graph.self_fusion {
        match r.self_fusion_identity() {
            Some(ok) => {
                o.check("|A|/|E| = |E|/|J|", ok, "");
                o.check("|A| = Σ_{c∈J} (dim Γ_c)²", j_sum_identity(&gd.fam, &gd.sys, r) == Some(true), "");
            }
            None => o.check("J identified", false, r.warning.clone().unwrap_or_default()),
        }
    }
    let Some(row) = row else { return };
    let cols = [
        ("|E|", row.order_e.as_deref(), Some(&r.order_e)),
        ("|A/E|", row.order_quotient.as_deref(), Some(&r.order_quotient)),
        ("|J|", row.order_j.as_deref().filter(|_| gd.graph.self_fusion), r.order_j.as_ref()),
    ];
    for (name, want, got) in cols {
        let (Some(want), Some(got)) = (want, got) else { continue };
        let Some(parsed) = RefValue::parse(want, &gd.sys) else {
            o.check(format!("{name} reference parses"), false, want.to_string());
            continue;
        };
        if let Some(ok) = parsed.matches(got) {
            o.check(format!("{name} = {want}"), ok, format!("computed {}", crate::tables::render_exact(got)));
        }
    }
}

fn trig(opts: &CheckOptions) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for kind in kinds(opts) {
        let level = default_level(opts, kind, 28, 21);
        let gs = match graphs(opts, kind, level, level) {
            Ok(g) => g,
            Err(e) => {
                items.push(error_item(Suite::Trig, &kind.to_string(), e));
                continue;
            }
        };
        let per = crate::par::map(&gs, |g| {
            let mut o = Out::new(Suite::Trig, format!("{} {}", g.kind, g.name));
            let sys = build_fusion(g.kind, g.level).expect("catalog level");
            match crate::modular::invariant_for(g) {
                Ok(inv) => {
                    let c = trig_identity_check(&sys, &inv, opts.tol);
                    let rhs = match kind {
                        Kind::Sl2 => "κ/2",
                        Kind::Sl3 => "3κ²/64",
                    };
                    o.check(format!("Σ Z_mn (sines) = {rhs}"), c.within_tol, format!("{:.12} vs {}", c.sum, c.expected));
                    o.check("Σ μ_m Z_mn μ_n = Σ μ_m² (exact)", c.exact, "");
                }
                Err(e) => o.check("invariant available", false, e.to_string()),
            }
            o.items
        });
        items.extend(per.into_iter().flatten());
    }
    items
}

fn discriminant(opts: &CheckOptions) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for kind in kinds(opts) {
        let (top, from) = match (kind, opts.level) {
            (Kind::Sl2, None) => (12, 1),
            (Kind::Sl3, None) => (8, 1),
            (_, Some(l)) => (l, if opts.graph.is_some() { l } else { 1 }),
        };
        let levels: Vec<u32> = (from..=top).collect();
        let per = crate::par::map(&levels, |&k| {
            let sys = build_fusion(kind, k).expect("valid level");
            let name = match kind {
                Kind::Sl2 => format!("A_{}", k + 1),
                Kind::Sl3 => format!("A_{k}"),
            };
            let mut o = Out::new(Suite::Discriminant, format!("{kind} {name}"));
            match discriminant_suite(&sys) {
                Ok(d) => {
                    o.check(
                        format!("D = {} (closed form)", closed_form_label(kind, sys.kappa)),
                        d.d == d.closed_form,
                        format!("D = {}", d.d),
                    );
                    if let Some(c) = &d.charpoly_disc {
                        o.check("disc(charpoly A_r) = D", *c == d.d, format!("{c}"));
                    }
                    let exact = d.prod_mu_sq.to_f64();
                    let rel = (exact - d.prod_formula).abs() / exact.abs().max(1.0);
                    o.check("Π μ² product formula", rel < opts.tol, format!("relative error {rel:.2e}"));
                }
                Err(e) => o.check("D integral", false, e.to_string()),
            }
            o.items
        });
        items.extend(per.into_iter().flatten());
    }
    items
}

fn closed_form_label(kind: Kind, kappa: u32) -> String {
    match kind {
        Kind::Sl2 => format!("2^{}·{kappa}^{}", kappa - 1, kappa as i64 - 3),
        Kind::Sl3 => {
            let k = kappa as i64;
            format!("3^{}·{kappa}^{}", (k - 2) * (k - 1) / 2, (k - 4) * (k - 2))
        }
    }
}

fn rigidity(opts: &CheckOptions) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for kind in kinds(opts) {
        if opts.graph.is_none() {
            let top = opts.level.unwrap_or(10).min(10);
            let levels: Vec<u32> = (1..=top).collect();
            let per = crate::par::map(&levels, |&k| {
                let mut o = Out::new(Suite::Rigidity, format!("{kind} A_k, k = {k}"));
                let sys = build_fusion(kind, k).expect("valid level");
                let r = sys.ring_axioms();
                o.check("unit, N_λ̄ = N_λᵗ, commutativity, associativity", r.is_ok(), r.err().map(|(a, b)| format!("fails at ({a}, {b})")).unwrap_or_default());
                o.items
            });
            items.extend(per.into_iter().flatten());
        }
        let (level, data_level) = match (kind, opts.level) {
            (Kind::Sl2, l) => (l.unwrap_or(28), 0),
            (Kind::Sl3, None) => (9, 21),
            (Kind::Sl3, Some(l)) => (l, l),
        };
        let gs = match graphs(opts, kind, level, data_level) {
            Ok(g) => g,
            Err(e) => {
                items.push(error_item(Suite::Rigidity, &kind.to_string(), e));
                continue;
            }
        };
        let per = crate::par::map(&gs, |g| {
            let mut o = Out::new(Suite::Rigidity, format!("{} {}", g.kind, g.name));
            let sys = build_fusion(g.kind, g.level).expect("catalog level");
            match annular(&sys, g) {
                Ok(fam) => {
                    let m = fam.module_property(&sys);
                    o.check("F_m F_n = Σ_p N_mn^p F_p, F_n ≥ 0", m.is_ok(), m.err().map(|(a, b)| format!("fails at ({a}, {b})")).unwrap_or_default());
                    o.check("rigidity F_n̄ = F_nᵗ", rigidity_check(g, &fam.f, &fam.irreps), "");
                }
                Err(e) => o.check("annular matrices nonnegative", false, e.to_string()),
            }
            o.items
        });
        items.extend(per.into_iter().flatten());
        if kind == Kind::Sl2 && opts.graph.is_none() {
            for n in 1..=4 {
                let t = tadpole(n).expect("n ≥ 1");
                let mut o = Out::new(Suite::Rigidity, format!("sl2 {}", t.name));
                let sys = build_fusion(Kind::Sl2, t.level).expect("valid level");
                let at_level = annular(&sys, &t).map(|f| rigidity_check(&t, &f.f, &f.irreps));
                o.check("rejected as a module: not rigid at its own level", at_level == Ok(false), "");
                let higher = build_fusion(Kind::Sl2, t.level + 2).expect("valid level");
                let mut lifted = t.clone();
                lifted.level = higher.level;
                let neg = matches!(annular(&higher, &lifted), Err(ModactError::NotAModule { .. }));
                o.check("negative annular entries two levels up", neg, "");
                items.extend(o.items);
            }
        }
    }
    items
}

fn splitting(opts: &CheckOptions) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for kind in kinds(opts) {
        let level = default_level(opts, kind, 28, 2);
        let gs = match graphs(opts, kind, level, level) {
            Ok(g) => g,
            Err(e) => {
                items.push(error_item(Suite::Splitting, &kind.to_string(), e));
                continue;
            }
        };
        for g in &gs {
            let mut o = Out::new(Suite::Splitting, format!("{} {}", g.kind, g.name));
            let sys = build_fusion(g.kind, g.level).expect("catalog level");
            let inv = match crate::modular::invariant_for(g) {
                Ok(i) => i,
                Err(e) => {
                    o.check("invariant available", false, e.to_string());
                    items.extend(o.items);
                    continue;
                }
            };
            match solve_splitting(&sys, &inv, opts.budget) {
                Ok(fam) => {
                    let v = verify_splitting(&sys, &inv, &fam);
                    o.check(
                        format!("{} toric matrices = Tr ZZᵗ, splitting verified", fam.len()),
                        v.is_ok() && fam.len() as i64 == inv.trace_zzt(),
                        v.err().map(|e| format!("{e:?}")).unwrap_or_default(),
                    );
                    if g.series == crate::graphs::Series::A {
                        let mut got = fam.toric.clone();
                        let mut want = sys.fusion_matrices().to_vec();
                        got.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
                        want.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
                        o.check("toric matrices are the fusion matrices", got == want, "");
                    }
                }
                Err(e @ SplitError::Exhausted { .. }) => o.check("solver completes within budget", false, e.to_string()),
                Err(e) => o.check("solution exists", false, e.to_string()),
            }
            items.extend(o.items);
        }
    }
    items
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(kind: Kind, graph: Option<&str>, level: Option<u32>) -> CheckOptions {
        CheckOptions { kind: Some(kind), level, graph: graph.map(String::from), ..Default::default() }
    }

    #[test]
    fn formulas_for_sl3_a3() {
        let items = run_suite(Suite::Formulas, &opts(Kind::Sl3, Some("A_3"), None));
        assert!(items.iter().any(|i| i.claim == "d_H = 164" && i.passed));
        assert!(items.iter().any(|i| i.claim == "d_B = 2920" && i.passed));
        assert!(items.iter().all(|i| i.passed), "{items:#?}");
    }

    #[test]
    fn discriminant_a11() {
        let items = run_suite(Suite::Discriminant, &opts(Kind::Sl2, None, Some(10)));
        let a11: Vec<&CheckItem> = items.iter().filter(|i| i.subject == "sl2 A_11").collect();
        assert!(a11.iter().any(|i| i.detail == "D = 10567230160896"));
        assert!(items.iter().all(|i| i.passed));
    }

    #[test]
    fn trig_sl2_small() {
        let items = run_suite(Suite::Trig, &opts(Kind::Sl2, None, Some(10)));
        assert!(items.len() >= 18);
        assert!(items.iter().all(|i| i.passed));
    }

    #[test]
    fn rigidity_rejects_tadpoles() {
        let items = run_suite(Suite::Rigidity, &opts(Kind::Sl2, None, Some(6)));
        assert!(items.iter().any(|i| i.subject == "sl2 T_2"));
        assert!(items.iter().all(|i| i.passed), "{:#?}", items.iter().filter(|i| !i.passed).collect::<Vec<_>>());
    }

    #[test]
    fn splitting_small() {
        let items = run_suite(Suite::Splitting, &opts(Kind::Sl2, None, Some(8)));
        assert!(items.iter().all(|i| i.passed));
        assert!(items.iter().any(|i| i.subject == "sl2 D_6" && i.claim.starts_with("12 toric")));
    }

    #[test]
    fn parse_suite_names() {
        assert_eq!("all".parse::<Suite>(), Ok(Suite::All));
        assert!("nope".parse::<Suite>().is_err());
    }
}
