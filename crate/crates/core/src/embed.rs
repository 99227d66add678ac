//! Finite embedding problems `α : G → Gal(L/K)` over finite fields, and the
//! decision whether the twisted problem for an automorphism `σ` of `K` is
//! solvable.
//!
//! `Gal(L/K)` is always presented as `Z/r` with `1` the relative Frobenius
//! `x ↦ x^|K|`, so `α` is an image list into `0..r`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;
use crate::ffield::{restrict_aut, AutSpec, FieldAut, FieldError, FqField, SubfieldEmbedding};
use crate::groups::{FiniteGroup, GroupError, GroupHom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("alpha is not surjective onto Gal(L/K)")]
    NotSurjective,
    #[error("kernel of alpha is not nilpotent")]
    KernelNotNilpotent,
    #[error("automorphism is not defined on the base field {0}")]
    NotOnBase(String),
    #[error("order {d} of sigma is not coprime to [L:K] = {degree}; no extension of sigma has order {d}")]
    CoprimalityFailure { d: usize, degree: usize, extensions: Vec<Extension> },
    #[error("tau does not restrict to sigma")]
    TauDoesNotExtend,
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

/// An automorphism of `L` restricting to `σ`, with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub frob: usize,
    pub order: usize,
}

/// A finite field extension `L/K` with an explicit embedding.
#[derive(Clone, Debug)]
pub struct FFGaloisExt {
    emb: SubfieldEmbedding,
}

impl FFGaloisExt {
    pub fn new(k: &FqField, l: &FqField) -> Result<Self, EmbedError> {
        Ok(FFGaloisExt { emb: SubfieldEmbedding::new(k, l)? })
    }

    pub fn base(&self) -> &FqField {
        self.emb.small()
    }

    pub fn top(&self) -> &FqField {
        self.emb.big()
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.emb
    }

    /// `[L : K]`.
    pub fn degree(&self) -> usize {
        self.emb.relative_degree()
    }

    /// `x ↦ x^|K|` on `L`.
    pub fn relative_frobenius(&self) -> FieldAut {
        self.top().frobenius(self.base().degree() as i64)
    }

    /// Every automorphism of `L` that restricts to `sigma` on `K`, checked
    /// on the image of the generator of `K`.
    pub fn extensions_of(&self, sigma: &FieldAut) -> Result<Vec<FieldAut>, EmbedError> {
        self.check_on_base(sigma)?;
        let m = self.base().degree();
        let n = self.top().degree();
        let out: Vec<FieldAut> = (0..n)
            .filter(|t| t % m == sigma.exponent())
            .map(|t| self.top().frobenius(t as i64))
            .collect();
        let x = self.base().generator();
        let image = self.emb.apply(&sigma.apply(&x));
        for tau in &out {
            if tau.apply(&self.emb.apply(&x)) != image {
                return Err(EmbedError::SelfCheck(format!("{tau:?} does not extend {sigma:?}")));
            }
        }
        Ok(out)
    }

    fn check_on_base(&self, sigma: &FieldAut) -> Result<(), EmbedError> {
        if sigma.field() != self.base() {
            return Err(EmbedError::NotOnBase(self.base().descriptor()));
        }
        Ok(())
    }
}

/// `α : G → Gal(L/K)` with `Gal(L/K)` encoded as `C_r`.
#[derive(Clone, Debug)]
pub struct EmbeddingProblem {
    group: Arc<FiniteGroup>,
    ext: FFGaloisExt,
    alpha: GroupHom,
    kernel_nilpotent: bool,
}

impl EmbeddingProblem {
    pub fn new(group: Arc<FiniteGroup>, ext: FFGaloisExt, alpha: Vec<u32>) -> Result<Self, EmbedError> {
        let target = Arc::new(FiniteGroup::cyclic(ext.degree()));
        let alpha = GroupHom::new(group.clone(), target, alpha)?;
        if !alpha.is_surjective() {
            return Err(EmbedError::NotSurjective);
        }
        let kernel_nilpotent = group.is_nilpotent_subgroup(&alpha.kernel());
        Ok(EmbeddingProblem { group, ext, alpha, kernel_nilpotent })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ext(&self) -> &FFGaloisExt {
        &self.ext
    }

    pub fn alpha(&self) -> &GroupHom {
        &self.alpha
    }

    pub fn kernel_nilpotent(&self) -> bool {
        self.kernel_nilpotent
    }

    /// The element of `C_r` standing for the relative Frobenius.
    fn frobenius_index(&self) -> u32 {
        (1 % self.ext.degree()) as u32
    }

    fn preimages_of_frobenius(&self) -> impl Iterator<Item = u32> + '_ {
        let f = self.frobenius_index();
        (0..self.group.order() as u32).filter(move |&g| self.alpha.apply(g) == f)
    }
}

/// A section `α' : Gal(L/K) → G`, if some preimage of the relative
/// Frobenius has order exactly `[L:K]`.
pub fn find_section(ep: &EmbeddingProblem) -> Option<GroupHom> {
    let r = ep.ext.degree();
    let g = ep.preimages_of_frobenius().find(|&g| ep.group.element_order(g) == r)?;
    let map: Vec<u32> = (0..r as u64).map(|j| ep.group.pow(g, j)).collect();
    let sec = GroupHom::new(Arc::new(FiniteGroup::cyclic(r)), ep.group.clone(), map)
        .expect("powers of an element of order r define a homomorphism from C_r");
    debug_assert!(sec.then(&ep.alpha).unwrap().images().iter().enumerate().all(|(i, &j)| i as u32 == j));
    Some(sec)
}

/// A weak solution: `β(Frob_F) = g` where `F/K` has degree `ord`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakSolution {
    pub g: u32,
    pub ord: usize,
}

/// Every weak solution, one per preimage of the relative Frobenius. Each is
/// checked to give a homomorphism `C_ord → G` whose composite with `α` is
/// the restriction `C_ord → C_r`.
pub fn find_weak_solutions(ep: &EmbeddingProblem) -> Result<Vec<WeakSolution>, EmbedError> {
    let r = ep.ext.degree();
    let mut out = Vec::new();
    for g in ep.preimages_of_frobenius() {
        let ord = ep.group.element_order(g);
        let map: Vec<u32> = (0..ord as u64).map(|j| ep.group.pow(g, j)).collect();
        let beta = GroupHom::new(Arc::new(FiniteGroup::cyclic(ord)), ep.group.clone(), map)?;
        let res_ok = (0..ord as u32).all(|j| ep.alpha.apply(beta.apply(j)) as usize == j as usize % r);
        if !res_ok {
            return Err(EmbedError::SelfCheck(format!("α∘β ≠ res for g = {g}")));
        }
        out.push(WeakSolution { g, ord });
    }
    if out.is_empty() {
        return Err(EmbedError::NotSurjective);
    }
    Ok(out)
}

/// The unique `τ ∈ Aut(L)` of order `d = ord(σ)` restricting to `σ`, which
/// exists exactly when `gcd(d, [L:K]) = 1`.
pub fn lift_sigma(ext: &FFGaloisExt, sigma: &FieldAut) -> Result<FieldAut, EmbedError> {
    let d = sigma.order();
    let r = ext.degree();
    let exts = ext.extensions_of(sigma)?;
    let of_order_d: Vec<&FieldAut> = exts.iter().filter(|t| t.order() == d).collect();
    if gcd(d as u64, r as u64) != 1 {
        if !of_order_d.is_empty() {
            return Err(EmbedError::SelfCheck(format!("{:?} has order {d} with gcd(d, r) > 1", of_order_d[0])));
        }
        return Err(EmbedError::CoprimalityFailure {
            d,
            degree: r,
            extensions: exts.iter().map(|t| Extension { frob: t.exponent(), order: t.order() }).collect(),
        });
    }
    match of_order_d.as_slice() {
        [tau] => Ok((*tau).clone()),
        other => Err(EmbedError::SelfCheck(format!("{} extensions of order {d}, expected one", other.len()))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma1Report {
    pub cond2: bool,
    pub cond3: bool,
}

/// `cond2`: `τ` has order `d` and `gcd(d, [L:K]) = 1`. `cond3`:
/// inside `Aut(L) = Z/N`, `⟨τ, Gal(L/K)⟩` is the internal direct product of
/// `⟨τ⟩` and `Gal(L/K)`. The two are computed independently and must agree.
pub fn lemma1_check(ext: &FFGaloisExt, sigma: &FieldAut, tau: &FieldAut) -> Result<Lemma1Report, EmbedError> {
    ext.check_on_base(sigma)?;
    if tau.field() != ext.top() || restrict_aut(tau, ext.embedding())? != *sigma {
        return Err(EmbedError::TauDoesNotExtend);
    }
    let d = sigma.order();
    let r = ext.degree();
    let cond2 = tau.order() == d && gcd(d as u64, r as u64) == 1;

    let n = ext.top().degree();
    let cyclic = |gens: &[usize]| {
        let mut mask = vec![false; n];
        mask[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = (elems[i] + g) % n;
                if !mask[y] {
                    mask[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        mask
    };
    let m = ext.base().degree();
    let a = cyclic(&[tau.exponent()]);
    let b = cyclic(&[m]);
    let ab = cyclic(&[tau.exponent(), m]);
    let count = |s: &[bool]| s.iter().filter(|&&x| x).count();
    let meet = a.iter().zip(&b).filter(|(&x, &y)| x && y).count();
    let cond3 = meet == 1 && count(&ab) == count(&a) * count(&b);

    if cond2 != cond3 {
        return Err(EmbedError::SelfCheck(format!(
            "conditions disagree for σ = {sigma:?}, τ = {tau:?}: order test {cond2}, fixed-field test {cond3}"
        )));
    }
    Ok(Lemma1Report { cond2, cond3 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Solvable,
    Unsolvable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub status: Status,
    /// Some weak solution has order coprime to `d`.
    pub cond_a: bool,
    /// `gcd(d, [L:K]) = 1`.
    pub cond_c: bool,
    pub split: bool,
    pub d: usize,
    pub degree: usize,
    pub tau: Option<AutSpec>,
    pub tau_unique: bool,
    /// The weak solution witnessing `cond_a`; `ord` is also `[F:K]`.
    pub witness: Option<WeakSolution>,
    /// Image of the relative Frobenius under the section, if split.
    pub section: Option<u32>,
}

/// Decide solvability of the twisted problem for `σ ∈ Aut(K)`.
///
/// Over a finite field the three-valued answer always collapses: if
/// `gcd(d, r) = 1` and `g` is any preimage of the Frobenius, the part of `g`
/// of order prime to `d` is still a preimage (its exponent is `1 mod r`), so
/// `cond_a` holds whenever `cond_c` does. `UNKNOWN` is kept in the type and
/// treated as a self-check failure on split problems.
pub fn decide_sigma_solvability(ep: &EmbeddingProblem, sigma: &FieldAut) -> Result<Verdict, EmbedError> {
    ep.ext.check_on_base(sigma)?;
    if !ep.kernel_nilpotent {
        return Err(EmbedError::KernelNotNilpotent);
    }
    let d = sigma.order();
    let r = ep.ext.degree();
    let cond_c = gcd(d as u64, r as u64) == 1;
    let weak = find_weak_solutions(ep)?;
    let witness = weak.iter().copied().find(|w| gcd(d as u64, w.ord as u64) == 1);
    let cond_a = witness.is_some();
    let section = find_section(ep).map(|s| s.apply(1 % r as u32));
    let split = section.is_some();
    if cond_a && !cond_c {
        return Err(EmbedError::SelfCheck("(a) holds but (c) fails".into()));
    }
    let status = if cond_a {
        Status::Solvable
    } else if !cond_c {
        Status::Unsolvable
    } else {
        Status::Unknown
    };
    if split && status == Status::Unknown {
        return Err(EmbedError::SelfCheck("split problem left undecided".into()));
    }
    let (tau, tau_unique) = if cond_a {
        let t = lift_sigma(&ep.ext, sigma)?;
        (Some(t.spec()), true)
    } else {
        (None, false)
    };
    Ok(Verdict { status, cond_a, cond_c, split, d, degree: r, tau, tau_unique, witness, section })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{epimorphisms_to_cyclic, shafarevich_step};
    use crate::Execution;

    fn field(p: u64, n: usize) -> FqField {
        FqField::new(p, n, 0).unwrap()
    }

    fn ext(p: u64, m: usize, n: usize) -> FFGaloisExt {
        FFGaloisExt::new(&field(p, m), &field(p, n)).unwrap()
    }

    fn ep(g: FiniteGroup, e: FFGaloisExt) -> EmbeddingProblem {
        let alpha = epimorphisms_to_cyclic(&g, e.degree()).remove(0);
        EmbeddingProblem::new(Arc::new(g), e, alpha).unwrap()
    }

    #[test]
    fn sections() {
        let e = ext(2, 1, 2);
        let p = EmbeddingProblem::new(Arc::new(FiniteGroup::cyclic(4)), e.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(find_section(&p).is_none());
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let p = EmbeddingProblem::new(Arc::new(v4), e.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(find_section(&p).is_some());
        let p = EmbeddingProblem::new(Arc::new(FiniteGroup::cyclic(2)), e, vec![0, 1]).unwrap();
        assert_eq!(find_section(&p).unwrap().images(), &[0, 1]);
    }

    #[test]
    fn projection_of_a_reduction_step_splits() {
        let st = shafarevich_step(&FiniteGroup::symmetric(3), Execution::default()).unwrap();
        let p = EmbeddingProblem::new(st.product.clone(), ext(2, 1, 2), st.pr.images().to_vec()).unwrap();
        assert!(find_section(&p).is_some());
    }

    #[test]
    fn weak_solution_orders() {
        let e = ext(2, 1, 2);
        let p = EmbeddingProblem::new(Arc::new(FiniteGroup::cyclic(4)), e.clone(), vec![0, 1, 0, 1]).unwrap();
        let w = find_weak_solutions(&p).unwrap();
        assert_eq!(w.iter().map(|w| w.ord).collect::<Vec<_>>(), vec![4, 4]);
        let p = EmbeddingProblem::new(Arc::new(FiniteGroup::cyclic(6)), e, vec![0, 1, 0, 1, 0, 1]).unwrap();
        let mut ords: Vec<usize> = find_weak_solutions(&p).unwrap().iter().map(|w| w.ord).collect();
        ords.sort();
        assert_eq!(ords, vec![2, 6, 6]);
    }

    #[test]
    fn lifting_examples() {
        let e = ext(2, 2, 6);
        let sigma = e.base().frobenius(1);
        let tau = lift_sigma(&e, &sigma).unwrap();
        assert_eq!(tau.exponent(), 3);
        let orders: Vec<usize> = e.extensions_of(&sigma).unwrap().iter().map(|t| t.order()).collect();
        assert_eq!(orders, vec![6, 2, 6]);
        assert!(lift_sigma(&e, &e.base().identity_aut()).unwrap().is_identity());

        let e = ext(2, 2, 4);
        match lift_sigma(&e, &e.base().frobenius(1)) {
            Err(EmbedError::CoprimalityFailure { d: 2, degree: 2, extensions }) => {
                assert_eq!(extensions, vec![Extension { frob: 1, order: 4 }, Extension { frob: 3, order: 4 }]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lemma1_examples() {
        let e = ext(2, 2, 6);
        let r = lemma1_check(&e, &e.base().frobenius(1), &e.top().frobenius(3)).unwrap();
        assert_eq!(r, Lemma1Report { cond2: true, cond3: true });
        let e = ext(2, 2, 4);
        let r = lemma1_check(&e, &e.base().frobenius(1), &e.top().frobenius(1)).unwrap();
        assert_eq!(r, Lemma1Report { cond2: false, cond3: false });
        let r = lemma1_check(&e, &e.base().identity_aut(), &e.top().identity_aut()).unwrap();
        assert!(r.cond2 && r.cond3);
        assert_eq!(
            lemma1_check(&e, &e.base().frobenius(1), &e.top().frobenius(2)).unwrap_err(),
            EmbedError::TauDoesNotExtend
        );
    }

    #[test]
    fn decision_examples() {
        let e = ext(2, 2, 4);
        let p = ep(FiniteGroup::cyclic(2), e.clone());
        let v = decide_sigma_solvability(&p, &e.base().frobenius(1)).unwrap();
        assert_eq!(v.status, Status::Unsolvable);
        assert!(v.split && !v.cond_c && v.tau.is_none());

        let e = ext(2, 2, 6);
        let p = ep(FiniteGroup::cyclic(3), e.clone());
        let v = decide_sigma_solvability(&p, &e.base().frobenius(1)).unwrap();
        assert_eq!(v.status, Status::Solvable);
        assert_eq!(v.tau, Some(AutSpec { frob: 3 }));

        let p = ep(FiniteGroup::symmetric(3), ext(3, 1, 2));
        let v = decide_sigma_solvability(&p, &p.ext().base().identity_aut()).unwrap();
        assert_eq!(v.status, Status::Solvable);

        // S3 → C1 has a non-nilpotent kernel
        let p = EmbeddingProblem::new(Arc::new(FiniteGroup::symmetric(3)), ext(2, 1, 1), vec![0; 6]).unwrap();
        assert_eq!(
            decide_sigma_solvability(&p, &p.ext().base().identity_aut()).unwrap_err(),
            EmbedError::KernelNotNilpotent
        );
    }

    #[test]
    fn verdict_json_shape() {
        let e = ext(2, 2, 6);
        let p = ep(FiniteGroup::cyclic(3), e.clone());
        let v = decide_sigma_solvability(&p, &e.base().frobenius(1)).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"status\":\"SOLVABLE\"") && s.contains("\"tau\":{\"frob\":3}"));
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
