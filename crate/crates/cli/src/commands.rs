use std::sync::Arc;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use skewgal::embed::{decide_sigma_solvability, lemma1_check, lift_sigma, EmbeddingProblem, FFGaloisExt};
use skewgal::ffield::{FieldAut, FqField};
use skewgal::groups::{solvable_tower, GroupJson, DEFAULT_ORDER_CAP};
use skewgal::orepoly::{ore_witness, OrePoly, OrePolyJson};
use skewgal::quat::{
    is_division_ring, level_global, level_local, theorem13_feasible, BaseField, FieldDescriptor, LevelPlace,
};
use skewgal::selftest::{run_suite, SelftestOptions, SUITES};
use skewgal::splitcon::{construct_lprime, verify_report, ConstructionReport, LocalSpec};
use skewgal::Execution;

use crate::error::CliError;

type Out = Result<(Value, u8), CliError>;

fn ok(v: impl serde::Serialize) -> Out {
    Ok((serde_json::to_value(v).expect("outputs serialize"), 0))
}

/// Parse inline JSON or the contents of the named file.
fn read_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::parse("Input", format!("{what}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::parse("Json", format!("{what}: {e}")))
}

fn fields(k: &str, l: &str, seed: u64) -> Result<(FqField, FqField, FFGaloisExt), CliError> {
    let kf = FqField::from_descriptor(k, seed)?;
    let lf = FqField::from_descriptor(l, seed)?;
    let ext = FFGaloisExt::new(&kf, &lf)?;
    Ok((kf, lf, ext))
}

fn frob(f: &FqField, k: usize, name: &str) -> Result<FieldAut, CliError> {
    if k >= f.degree() {
        return Err(CliError::parse("Automorphism", format!("{name} exponent {k} must be below {}", f.degree())));
    }
    Ok(f.frobenius(k as i64))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AlphaJson {
    Images(Vec<u32>),
    Object {
        images: Vec<u32>,
    },
}

pub fn decide(group: &str, alpha: &str, k: &str, l: &str, sigma: usize, seed: u64) -> Out {
    let g = read_json::<GroupJson>(group, "group")?.build(DEFAULT_ORDER_CAP)?;
    let images = match read_json::<AlphaJson>(alpha, "alpha")? {
        AlphaJson::Images(v) | AlphaJson::Object { images: v } => v,
    };
    let (kf, lf, ext) = fields(k, l, seed)?;
    let sigma = frob(&kf, sigma, "sigma")?;
    let ep = EmbeddingProblem::new(Arc::new(g), ext, images)?;
    let verdict = decide_sigma_solvability(&ep, &sigma)?;
    let mut v = serde_json::to_value(verdict).expect("verdict serializes");
    v["K"] = json!(kf.descriptor());
    v["L"] = json!(lf.descriptor());
    v["sigma"] = json!(sigma.spec());
    Ok((v, 0))
}

pub fn lift_tau(k: &str, l: &str, sigma: usize, seed: u64) -> Out {
    let (kf, lf, ext) = fields(k, l, seed)?;
    let sigma = frob(&kf, sigma, "sigma")?;
    let tau = lift_sigma(&ext, &sigma)?;
    let extensions: Vec<Value> =
        ext.extensions_of(&sigma)?.iter().map(|t| json!({ "frob": t.exponent(), "order": t.order() })).collect();
    ok(json!({
        "K": kf.descriptor(),
        "L": lf.descriptor(),
        "sigma": sigma.spec(),
        "d": sigma.order(),
        "degree": ext.degree(),
        "tau": tau.spec(),
        "extensions": extensions,
    }))
}

pub fn lemma1(k: &str, l: &str, sigma: usize, tau: usize, seed: u64) -> Out {
    let (kf, lf, ext) = fields(k, l, seed)?;
    let sigma = frob(&kf, sigma, "sigma")?;
    let tau = frob(&lf, tau, "tau")?;
    let r = lemma1_check(&ext, &sigma, &tau)?;
    ok(json!({
        "K": kf.descriptor(),
        "L": lf.descriptor(),
        "sigma": sigma.spec(),
        "tau": tau.spec(),
        "cond2": r.cond2,
        "cond3": r.cond3,
    }))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OreOp {
    Add,
    Sub,
    Mul,
    RightDivmod,
    LeftDivmod,
    RightGcd,
    LeftLcm,
    Witness,
}

pub fn ore(op: OreOp, a: &str, b: &str, seed: u64) -> Out {
    let aj: OrePolyJson = read_json(a, "a")?;
    let bj: OrePolyJson = read_json(b, "b")?;
    let base = FqField::from_descriptor(&aj.base, seed)?;
    let (x, y) = (OrePoly::from_json(&aj, &base)?, OrePoly::from_json(&bj, &base)?);
    let name = op.to_possible_value().expect("no skipped variants").get_name().to_string();
    let v = match op {
        OreOp::Add => json!({ "result": x.add(&y)?.to_json() }),
        OreOp::Sub => json!({ "result": x.sub(&y)?.to_json() }),
        OreOp::Mul => json!({ "result": x.mul(&y)?.to_json() }),
        OreOp::RightGcd => json!({ "result": x.right_gcd(&y)?.to_json() }),
        OreOp::LeftLcm => json!({ "result": x.left_lcm(&y)?.to_json() }),
        OreOp::RightDivmod => {
            let d = x.right_divmod(&y)?;
            let back = d.quotient.mul(&y)?.add(&d.remainder)? == x;
            json!({ "quotient": d.quotient.to_json(), "remainder": d.remainder.to_json(), "verified": back })
        }
        OreOp::LeftDivmod => {
            let d = x.left_divmod(&y)?;
            let back = y.mul(&d.quotient)?.add(&d.remainder)? == x;
            json!({ "quotient": d.quotient.to_json(), "remainder": d.remainder.to_json(), "verified": back })
        }
        OreOp::Witness => {
            let (r, s) = ore_witness(&x, &y)?;
            let xr = x.mul(&r)?;
            let verified = !xr.is_zero() && xr == y.mul(&s)?;
            json!({ "r": r.to_json(), "s": s.to_json(), "product": xr.to_json(), "verified": verified })
        }
    };
    let mut v = v;
    v["op"] = json!(name);
    Ok((v, 0))
}

pub fn tower(group: &str, exec: Execution) -> Out {
    let g = read_json::<GroupJson>(group, "group")?.build(DEFAULT_ORDER_CAP)?;
    let steps = solvable_tower(&g, exec)?;
    let mut order = g.order();
    let steps: Vec<Value> = steps
        .iter()
        .map(|s| {
            let v = json!({
                "order": order,
                "fitting": s.fitting.elements(),
                "fitting_order": s.fitting.len(),
                "complement": s.complement.elements(),
                "complement_order": s.complement.len(),
                "product_order": s.product.order(),
                "kernel_order": s.kernel_order(),
                "phi_surjective": s.phi.is_surjective(),
                "selection": s.selection,
            });
            order = s.complement.len();
            v
        })
        .collect();
    ok(json!({ "order": g.order(), "length": steps.len(), "steps": steps }))
}

pub fn construct(specs: &[String], l_ram: &[u64], p_kernel: u64, n_min: usize, seed: u64, exec: Execution) -> Out {
    let specs = specs.iter().map(|s| s.parse::<LocalSpec>()).collect::<Result<Vec<_>, _>>()?;
    ok(construct_lprime(&specs, l_ram, p_kernel, n_min, seed, exec)?)
}

pub fn level(place: Option<&str>, field: Option<&str>, precision: u32) -> Out {
    let r = match (place, field) {
        (Some(p), _) => {
            let place = match p {
                "inf" | "REAL" => LevelPlace::Real,
                _ => LevelPlace::Prime(p.parse().map_err(|_| CliError::parse("Place", format!("bad place {p:?}")))?),
            };
            level_local(place, precision)?
        }
        (None, Some(f)) => match f.parse::<FieldDescriptor>()? {
            FieldDescriptor::Global(k) => level_global(k)?,
            FieldDescriptor::Padic(p) => level_local(LevelPlace::Prime(p), precision)?,
        },
        (None, None) => return Err(CliError::parse("Usage", "level needs --place or --field")),
    };
    ok(r)
}

pub fn feasible(field: &str) -> Out {
    let k: BaseField = field.parse()?;
    let mut v = serde_json::to_value(theorem13_feasible(k)).expect("serializes");
    v["division_ring"] = serde_json::to_value(is_division_ring(k)?).expect("serializes");
    v["level"] = serde_json::to_value(level_global(k)?).expect("serializes");
    Ok((v, 0))
}

pub fn verify(report: &str, exec: Execution) -> Out {
    let report: ConstructionReport = read_json(report, "report")?;
    let outcome = verify_report(&report, exec);
    let v = serde_json::to_value(&outcome).expect("serializes");
    if outcome.ok {
        Ok((v, 0))
    } else {
        Err(CliError::uncertified(format!("report does not verify: {}", outcome.problems.join("; ")), v))
    }
}

pub fn selftest(ids: &[u8], timings: bool, seed: u64, exec: Execution) -> Out {
    let ids: Vec<u8> = if ids.is_empty() { SUITES.iter().map(|s| s.0).collect() } else { ids.to_vec() };
    let opts = SelftestOptions { seed, exec };
    let mut reports = Vec::new();
    for id in ids {
        let mut r = run_suite(id, &opts).ok_or_else(|| CliError::parse("Suite", format!("no suite {id}")))?;
        if !timings {
            r.elapsed_ms = None;
        }
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let v = json!({ "passed": passed, "seed": seed, "suites": reports });
    if passed {
        Ok((v, 0))
    } else {
        Err(CliError::uncertified("some suites failed", v))
    }
}
