//! The default catalog and the verification run over it.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::atlas::{
    affine_closure, atlas_by_spec, ex3_form, ex3_gamma_word, ex3_group, ex3_matrices, sl2, sp4, su3_extended,
};
use crate::autsearch::{linear_blockset_stabilizer, BlockSet, StabilizerResult};
use crate::design::{
    base_block_search, blocks_are_subspaces, build_design, check_flag_transitive, check_tactical_ratio, cici_check,
    g0_block_orbit, r_three_ways, spread_decomposition, tactical_counts, translation_block_stabilizer, verify_2design,
    Design, ParamsJson, SearchHit, SubspaceStatus, TacticalRow, VerifyMode, BRUTEFORCE_CAP,
};
use crate::error::{Error, Result};
use crate::group::{enumerate_elements, GenGroup, LinMap};
use crate::linalg::{canonical_subspace, evaluate_form, BilinearForm, Matrix};
use crate::suzuki::{
    classify_family, family4_search, family_design, is_spread, normalized_tuples, tangency_check, Family,
    SuzukiContext, SuzukiTuple, Tangency,
};

/// JSON schema of [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../data/report.schema.json");

pub const TOOL: &str = "ftdesign";

/// Largest group whose order is confirmed by enumeration.
const ENUM_ORDER_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub r: u64,
    pub b: u64,
}

impl ExpectedParams {
    pub fn new(v: u64, k: u64, lambda: u64) -> Self {
        let r = lambda * (k + 1);
        ExpectedParams { v, k, lambda, r, b: v * r / k }
    }

    /// `v = k^2`, `λ | k`, `r = λ(k+1)`, `bk = vr`.
    pub fn is_consistent(&self) -> bool {
        self.k > 0
            && self.lambda > 0
            && self.v == self.k * self.k
            && self.k % self.lambda == 0
            && self.r == self.lambda * (self.k + 1)
            && self.b * self.k == self.v * self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Recipe {
    /// SL2(q) on V2(q), block the GF(q^{1/2})-span of a basis.
    Sl2Subfield { q: u32 },
    /// SU3(s) x <-1> with the field automorphism on V3(s^2), block GF(s)^3.
    Su3Baer { s: u32 },
    /// Sp4(q) on V4(q), block a non-degenerate plane.
    Sp4Plane { q: u32 },
    /// T:Sz(q) with a block seed of the given family.
    Suzuki { q: u32, family: u8 },
    /// Linear stabilizer of a λ = 8 design on V6(2) found by search.
    G2Search,
    /// SL2(5) < Sp4(3), block `<(1,0,0,0),(0,0,0,1)>`.
    Sl25InSp43,
    /// Base-block search on V6(2).
    V6Search { lambda: u64 },
}

impl Recipe {
    pub fn describe(&self) -> String {
        match self {
            Recipe::Sl2Subfield { q } => format!("T:SL2({q}) on V2({q}), B = <e1,e2> over the half-degree subfield"),
            Recipe::Su3Baer { s } => format!("T:(SU3({s}) x <-1>).2 on V3({}), B = GF({s})^3", s * s),
            Recipe::Sp4Plane { q } => format!("T:Sp4({q}) on V4({q}), B = <e1,e2> non-degenerate"),
            Recipe::Suzuki { q, family } => format!("T:Sz({q}) on V4({q}), Family {family} seed"),
            Recipe::G2Search => "linear stabilizer of the lambda=8 design under SU3(2):2 on V6(2)".into(),
            Recipe::Sl25InSp43 => "T:SL2(5) on V4(3), B = <(1,0,0,0),(0,0,0,1)>".into(),
            Recipe::V6Search { lambda } => format!("base-block search on V6(2), lambda = {lambda}, group {}", v6_search_group(*lambda)),
        }
    }
}

/// Default group searched for each `λ` of the V6(2) table.
pub fn v6_search_group(lambda: u64) -> &'static str {
    match lambda {
        2 => "GammaL1-subgroup:p=2,2m=6,c=7,e=0,s=3",
        4 => "SU3(2)-on-V6(2)",
        _ => "SU3(2):2-on-V6(2):i=0",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "order")]
pub enum GroupFact {
    /// `|G0|`, confirmed by enumeration.
    G0Order(u64),
    /// Some design of the entry has a linear block-set stabilizer of this order.
    AutOrder(u64),
    AutOrderAtLeast(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub recipe: Recipe,
    pub expected: ExpectedParams,
    pub group_facts: Vec<GroupFact>,
    /// Only run with `large`, and verified on the through-0 slice.
    pub large: bool,
}

fn entry(id: &str, recipe: Recipe, expected: ExpectedParams, facts: Vec<GroupFact>) -> CatalogEntry {
    CatalogEntry { id: id.into(), recipe, expected, group_facts: facts, large: false }
}

/// Every entry, including those behind `large`.
pub fn default_catalog() -> Vec<CatalogEntry> {
    use GroupFact::*;
    let ep = ExpectedParams::new;
    let mut out = vec![
        entry("thm1-case6-q4", Recipe::Sl2Subfield { q: 4 }, ep(16, 4, 2), vec![G0Order(60)]),
        entry("thm1-case6-q9", Recipe::Sl2Subfield { q: 9 }, ep(81, 9, 3), vec![G0Order(720)]),
        entry("thm1-case7-s3", Recipe::Su3Baer { s: 3 }, ep(729, 27, 9), vec![G0Order(24192)]),
        entry("thm1-case8-q2", Recipe::Sp4Plane { q: 2 }, ep(16, 4, 4), vec![G0Order(720)]),
        entry("thm1-case8-q3", Recipe::Sp4Plane { q: 3 }, ep(81, 9, 9), vec![G0Order(51840)]),
    ];
    for (family, lambda) in [(1u8, 8), (2, 32), (3, 64), (4, 64)] {
        out.push(entry(
            &format!("thm1-case9-q8-family{family}"),
            Recipe::Suzuki { q: 8, family },
            ep(4096, 64, lambda),
            vec![G0Order(29120)],
        ));
    }
    out.push(CatalogEntry {
        id: "thm1-case9-q32-family1".into(),
        recipe: Recipe::Suzuki { q: 32, family: 1 },
        expected: ep(1 << 20, 1024, 32),
        group_facts: Vec::new(),
        large: true,
    });
    out.push(entry("thm1-case10-q2", Recipe::G2Search, ep(64, 8, 8), vec![AutOrder(12096)]));
    out.push(entry("thm1-case11", Recipe::Sl25InSp43, ep(81, 9, 3), vec![G0Order(120), AutOrder(480)]));
    out.push(entry("table1-lambda2", Recipe::V6Search { lambda: 2 }, ep(64, 8, 2), vec![G0Order(18)]));
    out.push(entry("table1-lambda4", Recipe::V6Search { lambda: 4 }, ep(64, 8, 4), vec![G0Order(216), AutOrderAtLeast(432)]));
    out.push(entry(
        "table1-lambda8",
        Recipe::V6Search { lambda: 8 },
        ep(64, 8, 8),
        vec![G0Order(432), AutOrder(12096), AutOrder(1296)],
    ));
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogConfig {
    /// Entry ids; a trailing `*` matches a prefix. Empty selects the default catalog.
    #[serde(default)]
    pub entries: Vec<String>,
    #[serde(default)]
    pub large: bool,
    /// Candidate shuffle seed for the automorphism search.
    #[serde(default)]
    pub seed: u64,
}

/// Entries selected by `config`, in catalog order.
pub fn select_entries(config: &CatalogConfig) -> Result<Vec<CatalogEntry>> {
    let all = default_catalog();
    if config.entries.is_empty() {
        return Ok(all.into_iter().filter(|e| config.large || !e.large).collect());
    }
    let mut keep = vec![false; all.len()];
    for pat in &config.entries {
        let hits: Vec<usize> = match pat.strip_suffix('*') {
            Some(prefix) => all
                .iter()
                .enumerate()
                .filter(|(_, e)| e.id.starts_with(prefix) && (config.large || !e.large))
                .map(|(i, _)| i)
                .collect(),
            None => all.iter().position(|e| &e.id == pat).into_iter().collect(),
        };
        if hits.is_empty() {
            return Err(Error::UnknownEntry(pat.clone()));
        }
        for i in hits {
            keep[i] = true;
        }
    }
    Ok(all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub recipe: String,
    pub expected: ExpectedParams,
    pub measured: Option<ParamsJson>,
    pub status: EntryStatus,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub witnesses: Vec<Value>,
    pub error: Option<String>,
}

impl EntryReport {
    fn new(e: &CatalogEntry) -> Self {
        EntryReport {
            id: e.id.clone(),
            recipe: e.recipe.describe(),
            expected: e.expected,
            measured: None,
            status: EntryStatus::Pass,
            checks: Vec::new(),
            notes: Vec::new(),
            witnesses: Vec::new(),
            error: None,
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: CatalogConfig,
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.pass == self.summary.total
    }

    pub fn entry(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Outcome of [`design_checks`].
#[derive(Debug, Clone)]
pub struct DesignChecks {
    pub lambda: Option<u64>,
    pub checks: Vec<Check>,
}

/// λ in every runnable mode, flag-transitivity, tactical ratio `k+1`, the
/// `|T_B|` bound, subspace / `T_B` consistency and `r` three ways. With
/// `slice_only`, λ comes from the through-0 slice alone and `r` from the
/// slice and from λ.
pub fn design_checks(d: &Design, g: &GenGroup, slice_only: bool) -> DesignChecks {
    let mut checks = Vec::new();
    let g0 = g.point_stabilizer();
    let k = d.k() as u64;

    let mut modes = Vec::new();
    if d.is_translation_invariant() {
        modes.push(VerifyMode::Slice);
        if g0.is_some() && !slice_only {
            modes.push(VerifyMode::Orbitwise);
        }
    }
    let brute_ok = d.blocks().is_some() && d.b() * k * k <= BRUTEFORCE_CAP;
    if !slice_only && (brute_ok || modes.is_empty()) {
        modes.push(VerifyMode::Bruteforce);
    }
    let mut lambdas = Vec::new();
    for mode in &modes {
        let name = format!("lambda-{}", serde_json::to_value(mode).expect("mode").as_str().unwrap_or("mode"));
        match verify_2design(d, *mode, g0.as_ref()) {
            Ok(l) => {
                checks.push(Check::new(name, true, format!("λ = {l}")));
                lambdas.push(l);
            }
            Err(e) => checks.push(Check::new(name, false, e.to_string())),
        }
    }
    let agree = !lambdas.is_empty() && lambdas.len() == modes.len() && lambdas.iter().all(|&l| l == lambdas[0]);
    checks.push(Check::new("lambda-modes-agree", agree, format!("{} modes, values {lambdas:?}", modes.len())));
    let lambda = agree.then(|| lambdas[0]);

    match check_flag_transitive(d, g) {
        Ok(fc) => checks.push(Check::new(
            "flag-transitive",
            fc.transitive,
            format!("{:?} orbit {} of {}", fc.method, fc.orbit_len, fc.expected),
        )),
        Err(e) => checks.push(Check::new("flag-transitive", false, e.to_string())),
    }

    match &g0 {
        Some(g0) => {
            let rows = tactical_counts(d, g0);
            let res = check_tactical_ratio(&rows, k + 1);
            checks.push(Check::new("tactical-ratio", res.is_ok(), format!("ratio {} rows {}", k + 1, fmt_rows(&rows))));
        }
        None => checks.push(Check::new("tactical-ratio", false, "needs G = T:G0")),
    }

    match lambda.map(|l| cici_check(d, l)) {
        Some(Ok(c)) => checks.push(Check::new("cici-bound", c.holds, format!("t = {}, m = {}, f = {}", c.t, c.m, c.f))),
        Some(Err(e)) => checks.push(Check::new("cici-bound", false, e.to_string())),
        None => checks.push(Check::new("cici-bound", false, "no uniform λ")),
    }

    let tb = translation_block_stabilizer(&d.space, &d.base_block);
    let status = blocks_are_subspaces(d);
    let sub = matches!(status, SubspaceStatus::PrimeSubspaces { .. });
    checks.push(Check::new(
        "subspace-translation-consistency",
        sub == (tb == k),
        format!("{status:?}, |T_B| = {tb}, k = {k}"),
    ));

    let r = d.r() as u64;
    match lambda {
        None => checks.push(Check::new("r-three-ways", false, "no uniform λ")),
        Some(l) if slice_only => {
            let ok = r == l * (k + 1);
            checks.push(Check::new("r-two-ways", ok, format!("through 0: {r}, λ(k+1): {}", l * (k + 1))));
        }
        Some(l) => match r_three_ways(d, l, g) {
            Ok(rc) => checks.push(Check::new(
                "r-three-ways",
                rc.agree,
                format!("through 0: {}, λ(k+1): {}, bk/v: {} (b = {})", rc.through_zero, rc.from_lambda, rc.from_b, rc.b),
            )),
            Err(e) => checks.push(Check::new("r-three-ways", false, e.to_string())),
        },
    }
    DesignChecks { lambda, checks }
}

fn fmt_rows(rows: &[TacticalRow]) -> String {
    let parts: Vec<String> = rows.iter().map(|r| format!("({},{})", r.orbit_len, r.meet)).collect();
    parts.join(" ")
}

fn measured(d: &Design, lambda: Option<u64>) -> ParamsJson {
    ParamsJson { v: d.v() as u64, k: d.k() as u64, lambda, r: d.r() as u64, b: d.b() }
}

fn params_check(rep: &mut EntryReport, name: &str, m: &ParamsJson) {
    let e = rep.expected;
    let ok = m.v == e.v && m.k == e.k && m.r == e.r && m.b == e.b && m.lambda == Some(e.lambda);
    let got = match m.lambda {
        Some(l) => format!("2-({},{},{}) r = {} b = {}", m.v, m.k, l, m.r, m.b),
        None => format!("({},{},non-uniform) r = {} b = {}", m.v, m.k, m.r, m.b),
    };
    rep.check(name, ok, format!("expected 2-({},{},{}) r = {} b = {}; got {got}", e.v, e.k, e.lambda, e.r, e.b));
}

/// Runs [`design_checks`] and the parameter comparison, with names prefixed.
fn verify_into(rep: &mut EntryReport, prefix: &str, d: &Design, g: &GenGroup, slice_only: bool) -> Option<u64> {
    let dc = design_checks(d, g, slice_only);
    let m = measured(d, dc.lambda);
    params_check(rep, &format!("{prefix}params"), &m);
    for c in dc.checks {
        rep.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
    }
    if rep.measured.is_none() {
        rep.measured = Some(m);
    }
    dc.lambda
}

fn g0_order_checks(rep: &mut EntryReport, facts: &[GroupFact], g0: &GenGroup) -> Result<()> {
    for f in facts {
        if let GroupFact::G0Order(o) = f {
            let n = enumerate_elements(g0, ENUM_ORDER_CAP)?.len() as u64;
            let known = g0.known_order.map(|x| x as u64);
            rep.check(
                "g0-order",
                n == *o && known.map_or(true, |k| k == n),
                format!("expected {o}, enumerated {n}, declared {known:?}"),
            );
        }
    }
    Ok(())
}

fn aut_order_checks(rep: &mut EntryReport, facts: &[GroupFact], orders: &[u64]) {
    for f in facts {
        match *f {
            GroupFact::AutOrder(o) => {
                rep.check(format!("aut-order-{o}"), orders.contains(&o), format!("stabilizer orders {orders:?}"))
            }
            GroupFact::AutOrderAtLeast(o) => rep.check(
                format!("aut-order-at-least-{o}"),
                orders.iter().any(|&x| x >= o),
                format!("stabilizer orders {orders:?}"),
            ),
            GroupFact::G0Order(_) => {}
        }
    }
}

fn aut_search(d: &Design, seed: u64) -> Result<StabilizerResult> {
    linear_blockset_stabilizer(&d.space, &d.through_zero_vec(), Some(seed))
}

/// Runs the selected entries.
pub fn run_catalog(config: &CatalogConfig) -> Result<Report> {
    let entries = select_entries(config)?;
    let mut runner = Runner { seed: config.seed, suzuki: HashMap::new() };
    let mut reports = Vec::new();
    for e in &entries {
        let mut rep = EntryReport::new(e);
        if !e.expected.is_consistent() {
            rep.check("expected-params-consistent", false, format!("{:?}", e.expected));
        }
        if let Err(err) = runner.run(e, &mut rep) {
            rep.error = Some(err.to_string());
        }
        rep.status = if rep.error.is_some() {
            EntryStatus::Error
        } else if rep.checks.iter().all(|c| c.pass) {
            EntryStatus::Pass
        } else {
            EntryStatus::Fail
        };
        reports.push(rep);
    }
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        total: reports.len(),
        pass: count(EntryStatus::Pass),
        fail: count(EntryStatus::Fail),
        error: count(EntryStatus::Error),
    };
    Ok(Report {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        entries: reports,
        summary,
    })
}

struct Runner {
    seed: u64,
    suzuki: HashMap<u32, Arc<SuzukiContext>>,
}

impl Runner {
    fn run(&mut self, e: &CatalogEntry, rep: &mut EntryReport) -> Result<()> {
        match e.recipe {
            Recipe::Sl2Subfield { q } => {
                let entry = sl2(q)?;
                let h = entry.field.h();
                if h % 2 != 0 {
                    return Err(Error::UnsupportedParams { family: "SL2 subfield block".into(), reason: format!("q = {q} is not a square") });
                }
                let s = entry.group.space.clone();
                let b = canonical_subspace(&s, &[vec![1, 0], vec![0, 1]], h / 2)?;
                self.simple(e, rep, &entry.group, &b.points(&s)).map(|_| ())
            }
            Recipe::Sp4Plane { q } => {
                let entry = sp4(q)?;
                let s = entry.group.space.clone();
                let b = canonical_subspace(&s, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], entry.field.h())?;
                self.simple(e, rep, &entry.group, &b.points(&s)).map(|_| ())
            }
            Recipe::Su3Baer { s } => self.su3_baer(e, rep, s),
            Recipe::Suzuki { q, family } => self.suzuki(e, rep, q, family),
            Recipe::G2Search => self.g2(e, rep),
            Recipe::Sl25InSp43 => self.sl2_5(e, rep),
            Recipe::V6Search { lambda } => self.v6_search(e, rep, lambda),
        }
    }

    fn simple(&mut self, e: &CatalogEntry, rep: &mut EntryReport, g0: &GenGroup, block: &[u32]) -> Result<Design> {
        g0_order_checks(rep, &e.group_facts, g0)?;
        let g = affine_closure(g0)?;
        let d = build_design(block, &g)?;
        let lambda = verify_into(rep, "", &d, &g, e.large);
        rep.witnesses.push(serde_json::to_value(d.to_json(lambda, false)).expect("design json"));
        Ok(d)
    }

    fn su3_baer(&mut self, e: &CatalogEntry, rep: &mut EntryReport, s: u32) -> Result<()> {
        let entry = su3_extended(s, false)?;
        let sp = entry.group.space.clone();
        let sub = entry.field.h() / 2;
        let rows = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let b = canonical_subspace(&sp, &rows, sub)?.points(&sp);
        let d = self.simple(e, rep, &entry.group, &b)?;
        let expect = [
            TacticalRow { orbit_len: ((s * s * s + 1) * (s * s - 1)) as usize, meet: (s * s - 1) as usize },
            TacticalRow { orbit_len: (s * s * (s * s * s + 1) * (s - 1)) as usize, meet: (s * s * (s - 1)) as usize },
        ];
        let rows = tactical_counts(&d, &entry.group);
        rep.check(
            "tactical-rows",
            rows == expect,
            format!("expected {}, got {}", fmt_rows(&expect), fmt_rows(&rows)),
        );
        // same block under the full scalar group, for comparison only
        let sim = su3_extended(s, true)?;
        let gs = affine_closure(&sim.group)?;
        let ds = build_design(&b, &gs)?;
        let ls = verify_2design(&ds, VerifyMode::Slice, None);
        let rows_s = tactical_counts(&ds, &sim.group);
        rep.notes.push(format!(
            "{}: r = {}, b = {}, slice λ = {}, tactical rows {}",
            sim.name,
            ds.r(),
            ds.b(),
            ls.map(|l| l.to_string()).unwrap_or_else(|e| e.to_string()),
            fmt_rows(&rows_s)
        ));
        Ok(())
    }

    fn context(&mut self, q: u32) -> Result<Arc<SuzukiContext>> {
        if let Some(c) = self.suzuki.get(&q) {
            return Ok(c.clone());
        }
        let c = Arc::new(SuzukiContext::new(q)?);
        self.suzuki.insert(q, c.clone());
        Ok(c)
    }

    fn suzuki(&mut self, e: &CatalogEntry, rep: &mut EntryReport, q: u32, family: u8) -> Result<()> {
        let ctx = self.context(q)?;
        let f = &ctx.field;
        if !e.large {
            g0_order_checks(rep, &e.group_facts, &ctx.group)?;
        }
        let tuple = match family {
            1 => SuzukiTuple::new(1, 0, 1, 0),
            2 => SuzukiTuple::new(1, 1, 1, 1),
            3 => {
                let mut found = None;
                for t in normalized_tuples(q) {
                    if classify_family(f, &t)? == Family::Family3 {
                        found = Some(t);
                        break;
                    }
                }
                found.ok_or_else(|| Error::Precondition(format!("no Family 3 seed for q = {q}")))?
            }
            4 => {
                let hits = family4_search(f)?;
                rep.check("family4-search", !hits.is_empty(), format!("{} normalized witnesses", hits.len()));
                *hits.first().ok_or_else(|| Error::Precondition(format!("no Family 4 seed for q = {q}")))?
            }
            _ => return Err(Error::InvalidTuple(format!("no family {family}"))),
        };
        let want = [Family::Family1, Family::Family2, Family::Family3, Family::Family4][family as usize - 1];
        let fd = family_design(&ctx, &tuple)?;
        rep.check("classify", fd.family == want, format!("{tuple:?} -> {:?}", fd.family));
        rep.check(
            "ovoid-meet",
            fd.ovoid_meet == q as usize - 1,
            format!("|B ∩ O| = {}, expected {}", fd.ovoid_meet, q - 1),
        );
        rep.notes.push(format!("block pairing {:?}", fd.block.pairing));
        if family == 1 {
            let qq = q as usize;
            rep.check(
                "ovoid-size",
                ctx.ovoid.len() == (qq * qq + 1) * (qq - 1),
                format!("{} vectors, {} projective points", ctx.ovoid.len(), ctx.ovoid.len() / (qq - 1)),
            );
            if !e.large {
                let orb = ctx.ovoid_orbit()?;
                rep.check("ovoid-is-orbit", orb == ctx.ovoid, format!("orbit of e1 has {} vectors", orb.len()));
            }
            rep.check(
                "spread",
                ctx.spread.len() == qq * qq + 1 && is_spread(&ctx.space, &ctx.spread),
                format!("{} components", ctx.spread.len()),
            );
            let t = tangency_check(&ctx, &fd.block.subspace)?;
            rep.check("tangent-not-in-spread", t == Tangency::TangentLineNotInSpread, format!("{t:?}"));
        }
        rep.witnesses.push(serde_json::to_value(fd.witness(q)).expect("witness json"));
        verify_into(rep, "", &fd.design, &ctx.affine, e.large);
        Ok(())
    }

    /// Searches, then runs the design checks and the automorphism search on every hit.
    fn search_hits(&mut self, rep: &mut EntryReport, spec: &str, lambda: u64) -> Result<(GenGroup, Vec<(SearchHit, StabilizerResult)>)> {
        let g0 = atlas_by_spec(spec)?.group;
        let hits = base_block_search(&g0, 8, lambda)?;
        rep.check("search-hits", !hits.is_empty(), format!("{} designs under {}", hits.len(), g0.name));
        let g = affine_closure(&g0)?;
        let mut out = Vec::new();
        for (i, hit) in hits.into_iter().enumerate() {
            let l = verify_into(rep, &format!("hit{i}/"), &hit.design, &g, false);
            let stab = aut_search(&hit.design, self.seed)?;
            rep.witnesses.push(json!({
                "hit": i,
                "design": hit.design.to_json(l, false),
                "source": hit.source,
                "stabilizer_order": stab.order,
            }));
            out.push((hit, stab));
        }
        Ok((g0, out))
    }

    fn g2(&mut self, e: &CatalogEntry, rep: &mut EntryReport) -> Result<()> {
        let g0 = atlas_by_spec(v6_search_group(8))?.group;
        let hits = base_block_search(&g0, 8, 8)?;
        let mut orders = Vec::new();
        let mut chosen = None;
        for hit in hits {
            let stab = aut_search(&hit.design, self.seed)?;
            orders.push(stab.order);
            if chosen.is_none() && e.group_facts.contains(&GroupFact::AutOrder(stab.order)) {
                chosen = Some((hit, stab));
            }
        }
        aut_order_checks(rep, &e.group_facts, &orders);
        let Some((hit, stab)) = chosen else {
            return Ok(());
        };
        let h0 = stab.group(format!("Stab[{}]", stab.order));
        let g = affine_closure(&h0)?;
        let d = build_design(&hit.base_block, &g)?;
        rep.check(
            "same-blocks",
            d.through_zero_vec() == hit.design.through_zero_vec(),
            format!("T:{} rebuilds the design found under {}", h0.name, g0.name),
        );
        let l = verify_into(rep, "", &d, &g, false);
        let gens: Vec<String> = stab.generators.iter().map(|m| m.to_fixture(2)).collect();
        rep.witnesses.push(json!({
            "design": d.to_json(l, false),
            "stabilizer_order": stab.order,
            "generators": gens,
        }));
        Ok(())
    }

    fn sl2_5(&mut self, e: &CatalogEntry, rep: &mut EntryReport) -> Result<()> {
        let (f, m) = ex3_matrices()?;
        let id = Matrix::identity(4);
        let a2 = m.alpha.pow(&f, 2)?;
        let comm = a2.inverse(&f)?.mul(&f, &m.beta.inverse(&f)?)?.mul(&f, &a2)?.mul(&f, &m.beta)?;
        let ab5 = m.alpha.mul(&f, &m.beta)?.pow(&f, 5)?;
        let rel = [
            ("alpha^4", m.alpha.pow(&f, 4)? == id),
            ("[alpha^2,beta]", comm == id),
            ("beta^3", m.beta.pow(&f, 3)? == id),
            ("(alpha beta)^5", ab5 == id),
        ];
        let bad: Vec<&str> = rel.iter().filter(|r| !r.1).map(|r| r.0).collect();
        rep.check("relations", bad.is_empty(), format!("not identity: {bad:?}"));
        let gamma = ex3_gamma_word(&f, &m)?;
        rep.check("gamma-word", gamma == m.gamma, "word in alpha, beta equals the tabulated gamma");

        let h = ex3_group(false, false)?;
        let s = h.group.space.clone();
        let b = canonical_subspace(&s, &[vec![1, 0, 0, 0], vec![0, 0, 0, 1]], 1)?.points(&s);
        let form = ex3_form(&f);
        let iso = is_totally_isotropic(&f, &form, &s, &b)?;
        rep.check("block-totally-isotropic", iso, "F vanishes on B x B");
        let fixes = |mat: &Matrix| -> Result<bool> {
            let l = LinMap::from_matrix(&s, mat)?;
            let mut img: Vec<u32> = b.iter().map(|&x| l.apply(&s, x)).collect();
            img.sort_unstable();
            Ok(img == b)
        };
        rep.check("alpha-fixes-block", fixes(&m.alpha)?, "alpha maps B onto B");
        rep.check("gamma-moves-block", !fixes(&gamma)?, "gamma does not map B onto B");
        let orbit_len = g0_block_orbit(&s, &b, &h.group)?.len();
        rep.check("block-orbit", orbit_len == 30, format!("|B^H0| = {orbit_len}"));

        let d = self.simple(e, rep, &h.group, &b)?;
        let stab = aut_search(&d, self.seed)?;
        aut_order_checks(rep, &e.group_facts, &[stab.order]);
        let bs = BlockSet::new(&d.space, &d.through_zero_vec())?;
        for (delta, psi) in [(false, false), (true, false), (true, true)] {
            let x = ex3_group(delta, psi)?;
            let n = enumerate_elements(&x.group, ENUM_ORDER_CAP)?.len();
            let ok = x.group.gens.iter().all(|g| bs.is_preserved_by(&g.lin));
            rep.check(format!("preserved-by-{}", x.name), ok, format!("order {n}"));
        }
        let elems = enumerate_elements(&stab.group("stab"), ENUM_ORDER_CAP)?;
        let (mut isometries, mut similitudes) = (0, 0);
        for g in &elems.elems {
            let a = g.lin.to_matrix(&stab.space).ok_or(Error::Precondition("non-linear element".into()))?;
            match form_multiplier(&f, &form.gram, &a)? {
                Some(1) => {
                    isometries += 1;
                    similitudes += 1;
                }
                Some(_) => similitudes += 1,
                None => {}
            }
        }
        rep.notes.push(format!(
            "linear stabilizer of the block set: order {}, {isometries} isometries and {similitudes} similitudes of F",
            stab.order
        ));
        let gens: Vec<String> = stab.generators.iter().map(|m| m.to_fixture(3)).collect();
        rep.witnesses.push(json!({ "stabilizer_order": stab.order, "generators": gens }));
        Ok(())
    }

    fn v6_search(&mut self, e: &CatalogEntry, rep: &mut EntryReport, lambda: u64) -> Result<()> {
        let (g0, hits) = self.search_hits(rep, v6_search_group(lambda), lambda)?;
        g0_order_checks(rep, &e.group_facts, &g0)?;
        let orders: Vec<u64> = hits.iter().map(|h| h.1.order).collect();
        aut_order_checks(rep, &e.group_facts, &orders);
        if lambda == 2 {
            let splits: Vec<Option<Vec<usize>>> = hits
                .iter()
                .map(|(h, _)| spread_decomposition(&h.design, 2).map(|p| p.iter().map(Vec::len).collect()))
                .collect();
            let ok = splits.iter().any(|s| s.as_deref() == Some(&[9, 9][..]));
            rep.check("two-spreads", ok, format!("spread partitions per hit {splits:?}"));
        }
        Ok(())
    }
}

fn is_totally_isotropic(f: &crate::field::FieldSpec, form: &BilinearForm, s: &crate::space::Space, pts: &[u32]) -> Result<bool> {
    for &x in pts {
        for &y in pts {
            if evaluate_form(f, form, &s.vector(x), &s.vector(y))? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `c` with `A G A^T = c G`, if any.
fn form_multiplier(f: &crate::field::FieldSpec, gram: &Matrix, a: &Matrix) -> Result<Option<u32>> {
    let img = a.mul(f, gram)?.mul(f, &a.transpose())?;
    let n = gram.rows();
    let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| gram.get(i, j) != 0) else {
        return Ok(None);
    };
    let c = f.div(img.get(i, j), gram.get(i, j))?;
    Ok((img == gram.scale(f, c)).then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_params_are_consistent() {
        for e in default_catalog() {
            assert!(e.expected.is_consistent(), "{}", e.id);
        }
    }

    #[test]
    fn selection() {
        let all = select_entries(&CatalogConfig::default()).unwrap();
        assert!(all.iter().all(|e| !e.large));
        let cfg = CatalogConfig { entries: vec!["thm1-case9-q8-*".into()], ..Default::default() };
        assert_eq!(select_entries(&cfg).unwrap().len(), 4);
        let cfg = CatalogConfig { entries: vec!["thm1-case9-*".into()], large: true, ..Default::default() };
        assert_eq!(select_entries(&cfg).unwrap().len(), 5);
        let cfg = CatalogConfig { entries: vec!["nope".into()], ..Default::default() };
        assert_eq!(select_entries(&cfg).unwrap_err(), Error::UnknownEntry("nope".into()));
    }

    #[test]
    fn ex4_q4_entry_passes() {
        let cfg = CatalogConfig { entries: vec!["thm1-case6-q4".into()], ..Default::default() };
        let r = run_catalog(&cfg).unwrap();
        let e = &r.entries[0];
        assert_eq!(e.status, EntryStatus::Pass, "{:?}", e.checks);
        let m = e.measured.as_ref().unwrap();
        assert_eq!((m.v, m.k, m.lambda, m.r, m.b), (16, 4, Some(2), 10, 40));
        assert!(e.find("lambda-bruteforce").unwrap().pass);
    }

    #[test]
    fn form_multiplier_of_scalar() {
        let f = crate::field::make_field(3, 1).unwrap();
        let form = ex3_form(&f);
        let a = Matrix::diag(&[2, 2, 2, 2]);
        assert_eq!(form_multiplier(&f, &form.gram, &a).unwrap(), Some(1));
        let b = Matrix::diag(&[1, 2, 1, 2]);
        assert_eq!(form_multiplier(&f, &form.gram, &b).unwrap(), Some(2));
        let c = Matrix::diag(&[1, 1, 1, 2]);
        assert_eq!(form_multiplier(&f, &form.gram, &c).unwrap(), None);
    }
}
