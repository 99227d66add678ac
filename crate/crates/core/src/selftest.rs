//! Built-in property suites. Each runs a fixed, seeded workload against an
//! independent check and reports case and failure counts.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, primes_up_to};
use crate::embed::{decide_sigma_solvability, find_section, lemma1_check, lift_sigma, EmbedError, EmbeddingProblem, FFGaloisExt, Status};
use crate::ffield::FqField;
use crate::groups::{catalog::catalog, epimorphisms_to_cyclic, solvable_tower, FiniteGroup};
use crate::orepoly::{ore_witness, OreRing};
use crate::par::{self, Execution};
use crate::quat::{level_local, theorem13_feasible, BaseField, Level, LevelCertificate, LevelPlace, DEFAULT_PRECISION};
use crate::splitcon::{construct_lprime, odd_prime_for_case_c, verify_report, LocalEvidence, LocalSpec};

/// Fields used by the ring-law and division suites, as `(p, n)`.
pub const ORE_FIELDS: [(u64, usize); 4] = [(2, 2), (2, 4), (3, 3), (5, 2)];

/// `(p, N)`: every `L = F_{p^n}` with `n <= N` is scanned by suites 3 and 4.
pub const LEMMA_RANGE: [(u64, usize); 4] = [(2, 12), (3, 8), (5, 6), (7, 4)];

/// Base fields of suite 5, as `(p, m)`.
pub const DECISION_BASES: [(u64, usize); 3] = [(2, 1), (2, 2), (3, 2)];

const LAW_CASES: usize = 10_000;
const DIVISION_CASES: usize = 10_000;
const WITNESS_CASES: usize = 1_000;
const CHUNK: usize = 500;
const MAX_NOTES: usize = 8;

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct SelftestOptions {
    pub seed: u64,
    pub exec: Execution,
}


#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub budget_ms: Option<u64>,
    pub notes: Vec<String>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < MAX_NOTES {
                self.notes.push(note());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        for n in other.notes {
            if self.notes.len() < MAX_NOTES {
                self.notes.push(n);
            }
        }
        self
    }

    fn fail(note: String) -> Tally {
        Tally { cases: 1, failures: 1, notes: vec![note] }
    }
}

fn sum(ts: Vec<Tally>) -> Tally {
    ts.into_iter().fold(Tally::default(), Tally::merge)
}

/// `(id, name, time budget in ms)`.
pub const SUITES: [(u8, &str, Option<u64>); 9] = [
    (1, "ore ring laws", Some(10_000)),
    (2, "right division and ore witnesses", None),
    (3, "order and fixed-field conditions agree", Some(60_000)),
    (4, "extensions of sigma of order d", None),
    (5, "finite-field embedding decision", None),
    (6, "fitting subgroup and tower oracles", None),
    (7, "constructor end to end", Some(180_000)),
    (8, "odd prime dividing q^3 - 1", None),
    (9, "levels and feasibility", None),
];

pub fn run_suite(id: u8, opts: &SelftestOptions) -> Option<SuiteReport> {
    let &(_, name, budget) = SUITES.iter().find(|s| s.0 == id)?;
    let start = Instant::now();
    let t = match id {
        1 => ore_laws(opts),
        2 => division(opts),
        3 => lemma_equivalence(opts),
        4 => extension_orders(opts),
        5 => decision(opts),
        6 => group_oracles(opts),
        7 => constructor(opts),
        8 => case_c(opts),
        _ => levels(),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let mut notes = t.notes;
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    if !in_budget {
        notes.push(format!("took {elapsed} ms, budget {} ms", budget.unwrap()));
    }
    Some(SuiteReport {
        id,
        name: name.to_string(),
        passed: t.failures == 0 && t.cases > 0 && in_budget,
        cases: t.cases,
        failures: t.failures,
        elapsed_ms: Some(elapsed),
        budget_ms: budget,
        notes,
    })
}

pub fn run_all(opts: &SelftestOptions) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s.0, opts)).collect()
}

fn rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let mixed = parts.iter().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, &x| {
        (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(17)
    });
    ChaCha8Rng::seed_from_u64(mixed)
}

fn ore_rings() -> Vec<(String, OreRing)> {
    let mut out = Vec::new();
    for (p, n) in ORE_FIELDS {
        let f = FqField::new(p, n, 0).expect("small field");
        for k in 0..n {
            out.push((format!("F_{p}^{n} twist {k}"), OreRing::new(f.frobenius(k as i64))));
        }
    }
    out
}

/// Chunked jobs over every ring: `(ring index, chunk index)`.
fn chunks(rings: usize, cases: usize) -> Vec<(usize, usize)> {
    (0..rings).flat_map(|r| (0..cases.div_ceil(CHUNK)).map(move |c| (r, c))).collect()
}

fn ore_laws(opts: &SelftestOptions) -> Tally {
    let rings = ore_rings();
    let jobs = chunks(rings.len(), LAW_CASES);
    sum(par::map(opts.exec, &jobs, |&(ri, ci)| {
        let (label, ring) = &rings[ri];
        let f = ring.base();
        let mut r = rng(opts.seed, &[1, ri as u64, ci as u64]);
        let mut t = Tally::default();
        for _ in 0..CHUNK {
            let (a, b, c) = (ring.random(4, &mut r), ring.random(4, &mut r), ring.random(4, &mut r));
            let ab = a.mul(&b).unwrap();
            let bc = b.mul(&c).unwrap();
            t.check(ab.mul(&c).unwrap() == a.mul(&bc).unwrap(), || format!("{label}: associativity"));
            let left = a.mul(&b.add(&c).unwrap()).unwrap() == ab.add(&a.mul(&c).unwrap()).unwrap();
            let right = a.add(&b).unwrap().mul(&c).unwrap() == a.mul(&c).unwrap().add(&bc).unwrap();
            t.check(left && right, || format!("{label}: distributivity"));
            let (x, y) = (ring.random_nonzero(5, &mut r), ring.random_nonzero(5, &mut r));
            let deg = x.mul(&y).unwrap().degree();
            t.check(deg == Some(x.degree().unwrap() + y.degree().unwrap()), || format!("{label}: degree"));
            let s = f.random(&mut r);
            let lhs = ring.t().mul(&ring.constant(s.clone())).unwrap();
            t.check(lhs == ring.monomial(ring.twist().apply(&s), 1), || format!("{label}: Ta = σ(a)T"));
        }
        t
    }))
}

fn division(opts: &SelftestOptions) -> Tally {
    let rings = ore_rings();
    let per_ring = DIVISION_CASES.div_ceil(rings.len());
    let jobs = chunks(rings.len(), per_ring);
    let div = sum(par::map(opts.exec, &jobs, |&(ri, ci)| {
        let (label, ring) = &rings[ri];
        let mut r = rng(opts.seed, &[2, ri as u64, ci as u64]);
        let mut t = Tally::default();
        for _ in 0..CHUNK.min(per_ring) {
            let f = ring.random(8, &mut r);
            let g = ring.random_nonzero(4, &mut r);
            let ok = match f.right_divmod(&g) {
                Ok(d) => {
                    d.quotient.mul(&g).unwrap().add(&d.remainder).unwrap() == f && d.remainder.degree() < g.degree()
                }
                Err(_) => false,
            };
            t.check(ok, || format!("{label}: right division"));
        }
        t
    }));
    let per_ring = WITNESS_CASES.div_ceil(rings.len());
    let wit = sum(par::map_range(opts.exec, 0..rings.len(), |ri| {
        let (label, ring) = &rings[ri];
        let mut r = rng(opts.seed, &[3, ri as u64]);
        let mut t = Tally::default();
        for _ in 0..per_ring {
            let x = ring.random_nonzero(4, &mut r);
            let y = ring.random_nonzero(4, &mut r);
            let ok = match ore_witness(&x, &y) {
                Ok((a, b)) => {
                    let xa = x.mul(&a).unwrap();
                    !xa.is_zero() && xa == y.mul(&b).unwrap()
                }
                Err(_) => false,
            };
            t.check(ok, || format!("{label}: ore witness"));
        }
        t
    }));
    div.merge(wit)
}

struct FieldCache(HashMap<(u64, usize), FqField>);

impl FieldCache {
    fn get(&mut self, p: u64, n: usize) -> FqField {
        self.0.entry((p, n)).or_insert_with(|| FqField::new(p, n, 0).expect("field")).clone()
    }
}

/// Every `(K, L)` with `L = F_{p^n}` in [`LEMMA_RANGE`] and `K ⊆ L`.
fn lemma_extensions() -> Vec<(u64, usize, usize)> {
    let mut out = Vec::new();
    for (p, max) in LEMMA_RANGE {
        for n in 1..=max {
            for m in (1..=n).filter(|m| n % m == 0) {
                out.push((p, m, n));
            }
        }
    }
    out
}

fn with_ext(p: u64, m: usize, n: usize, f: impl FnOnce(&FqField, &FFGaloisExt) -> Tally) -> Tally {
    let (k, l) = match (FqField::new(p, m, 0), FqField::new(p, n, 0)) {
        (Ok(k), Ok(l)) => (k, l),
        _ => return Tally::fail(format!("cannot build F_{p}^{m} ⊆ F_{p}^{n}")),
    };
    match FFGaloisExt::new(&k, &l) {
        Ok(ext) => f(&k, &ext),
        Err(e) => Tally::fail(format!("F_{p}^{m} ⊆ F_{p}^{n}: {e}")),
    }
}

fn lemma_equivalence(opts: &SelftestOptions) -> Tally {
    let exts = lemma_extensions();
    sum(par::map(opts.exec, &exts, |&(p, m, n)| {
        with_ext(p, m, n, |k, ext| {
            let mut t = Tally::default();
            for s in 0..m {
                let sigma = k.frobenius(s as i64);
                for tau in ext.extensions_of(&sigma).unwrap_or_default() {
                    let ok = matches!(lemma1_check(ext, &sigma, &tau), Ok(r) if r.cond2 == r.cond3);
                    t.check(ok, || format!("p={p} m={m} n={n} σ={s} τ={}", tau.exponent()));
                }
            }
            t
        })
    }))
}

fn extension_orders(opts: &SelftestOptions) -> Tally {
    let exts = lemma_extensions();
    sum(par::map(opts.exec, &exts, |&(p, m, n)| {
        with_ext(p, m, n, |k, ext| {
            let mut t = Tally::default();
            let r = ext.degree();
            for s in 0..m {
                let sigma = k.frobenius(s as i64);
                let d = sigma.order();
                let of_order_d: Vec<_> =
                    ext.extensions_of(&sigma).unwrap_or_default().into_iter().filter(|x| x.order() == d).collect();
                let ok = if gcd(d as u64, r as u64) == 1 {
                    of_order_d.len() == 1 && matches!(lift_sigma(ext, &sigma), Ok(x) if x == of_order_d[0])
                } else {
                    of_order_d.is_empty() && matches!(lift_sigma(ext, &sigma), Err(EmbedError::CoprimalityFailure { .. }))
                };
                t.check(ok, || format!("p={p} m={m} n={n} σ={s}: {} extensions of order {d}", of_order_d.len()));
            }
            t
        })
    }))
}

fn decision(opts: &SelftestOptions) -> Tally {
    let groups: Vec<Arc<FiniteGroup>> =
        catalog().into_iter().filter(|e| e.group.order() <= 16).map(|e| Arc::new(e.group)).collect();
    let mut cache = FieldCache(HashMap::new());
    let mut jobs = Vec::new();
    for (p, m) in DECISION_BASES {
        let k = cache.get(p, m);
        for g in &groups {
            for r in (1..=g.order()).filter(|r| g.order() % r == 0) {
                jobs.push((k.clone(), cache.get(p, m * r), g.clone(), r));
            }
        }
    }
    sum(par::map(opts.exec, &jobs, |(k, l, g, r)| {
        let mut t = Tally::default();
        let ext = match FFGaloisExt::new(k, l) {
            Ok(e) => e,
            Err(e) => return Tally::fail(e.to_string()),
        };
        for alpha in epimorphisms_to_cyclic(g, *r) {
            let ep = match EmbeddingProblem::new(Arc::clone(g), ext.clone(), alpha) {
                Ok(ep) => ep,
                Err(e) => return Tally::fail(e.to_string()),
            };
            if !ep.kernel_nilpotent() || find_section(&ep).is_none() {
                continue;
            }
            for s in 0..k.degree() {
                let sigma = k.frobenius(s as i64);
                let want = gcd(sigma.order() as u64, *r as u64) == 1;
                let ok = match decide_sigma_solvability(&ep, &sigma) {
                    Ok(v) => {
                        v.status != Status::Unknown
                            && (v.status == Status::Solvable) == want
                            && v.cond_a == v.cond_c
                            && v.split
                    }
                    Err(_) => false,
                };
                t.check(ok, || format!("{} over {}, r={r}, σ={s}", g.order(), k.descriptor()));
            }
        }
        t
    }))
}

fn group_oracles(opts: &SelftestOptions) -> Tally {
    let entries = catalog();
    sum(par::map(opts.exec, &entries, |e| {
        let g = &e.group;
        let mut t = Tally::default();
        // maximal nilpotent normal subgroup by brute force
        let normal_nilpotent: Vec<_> =
            g.all_subgroups().into_iter().filter(|h| g.is_normal(h) && g.is_nilpotent_subgroup(h)).collect();
        let fit = g.fitting_subgroup();
        let is_max = normal_nilpotent.iter().all(|h| h.is_subset_of(&fit)) && normal_nilpotent.contains(&fit);
        t.check(is_max, || format!("{}: Fitting subgroup", e.name));
        match solvable_tower(g, Execution::Sequential) {
            Ok(steps) => {
                let mut cur = g.clone();
                for (i, s) in steps.iter().enumerate() {
                    let prod = &s.product;
                    let hom = (0..prod.order() as u32).all(|u| {
                        (0..prod.order() as u32)
                            .all(|v| s.phi.apply(prod.mul(u, v)) == cur.mul(s.phi.apply(u), s.phi.apply(v)))
                    });
                    let mut seen = vec![false; cur.order()];
                    (0..prod.order() as u32).for_each(|u| seen[s.phi.apply(u) as usize] = true);
                    let onto = seen.iter().all(|&b| b);
                    let fit_ok = s.fitting == cur.fitting_subgroup();
                    let shrinks = s.complement_group.order() < cur.order();
                    t.check(hom && onto && fit_ok && shrinks, || format!("{}: tower step {i}", e.name));
                    cur = (*s.complement_group).clone();
                }
                t.check(cur.order() == 1, || format!("{}: tower does not end at 1", e.name));
            }
            Err(err) => t.check(false, || format!("{}: {err}", e.name)),
        }
        t
    }))
}

fn constructor(opts: &SelftestOptions) -> Tally {
    let specs: Vec<LocalSpec> = ["3:rq", "inf:ts"].iter().map(|s| s.parse().unwrap()).collect();
    let mut t = Tally::default();
    for n in 3..=5 {
        let start = Instant::now();
        let report = match construct_lprime(&specs, &[], 5, n, opts.seed, opts.exec) {
            Ok(r) => r,
            Err(e) => {
                t.check(false, || format!("n={n}: {e}"));
                continue;
            }
        };
        let v = verify_report(&report, opts.exec);
        let c = &v.certificates;
        let eisenstein = c.locals.iter().any(|l| l.ok && matches!(l.evidence, LocalEvidence::Eisenstein { .. }));
        let sturm = c.locals.iter().any(|l| l.ok && l.evidence == LocalEvidence::Sturm { real_roots: n });
        let cycles = c.sn.n_cycle && c.sn.n_minus_1_cycle && c.sn.transposition;
        let resolvent = n > 4 || v.resolvent_agrees == Some(true);
        let quick = start.elapsed().as_secs() < 60;
        t.check(v.ok && eisenstein && sturm && cycles && c.disjoint.odd && resolvent && quick, || {
            format!("n={n}: verify {:?}", v.problems)
        });
    }
    t
}

fn case_c(opts: &SelftestOptions) -> Tally {
    let qs: Vec<u64> = primes_up_to(10_000)
        .into_iter()
        .flat_map(|p| std::iter::successors(Some(p), move |&q| Some(q * p)).take_while(|&q| q <= 10_000))
        .collect();
    let mut t = sum(par::map(opts.exec, &qs, |&q| {
        let mut t = Tally::default();
        let ok = match odd_prime_for_case_c(q) {
            Ok(r) => r % 2 == 1 && is_prime(r) && ((q as u128).pow(3) - 1).is_multiple_of(r as u128),
            Err(_) => false,
        };
        t.check(ok, || format!("q={q}"));
        t
    }));
    t.check(odd_prime_for_case_c(2) == Ok(7), || "q=2 should give 7".into());
    t
}

fn levels() -> Tally {
    let mut t = Tally::default();
    for p in primes_up_to(1000) {
        let want = if p == 2 { 4 } else if p % 4 == 1 { 1 } else { 2 };
        let ok = matches!(level_local(LevelPlace::Prime(p), DEFAULT_PRECISION),
            Ok(r) if r.level == Level::Finite(want) && r.witness.is_some() && r.verify());
        t.check(ok, || format!("level of Q_{p}"));
    }
    let two = level_local(LevelPlace::Prime(2), DEFAULT_PRECISION).ok().map(|r| r.certificate);
    t.check(
        matches!(two, Some(LevelCertificate::ResidueSearch { modulus: 16, three_square_hits: 0, primitive_zeros: 0 })),
        || "2-adic residue search".into(),
    );
    t.check(theorem13_feasible(BaseField::Rational).feasible, || "Q should be feasible".into());
    t.check(!theorem13_feasible(BaseField::Quadratic(-1)).feasible, || "Q(√-1) should not be feasible".into());
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_suites_pass() {
        let opts = SelftestOptions::default();
        for id in [8, 9] {
            let r = run_suite(id, &opts).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(run_suite(10, &opts).is_none());
    }
}
