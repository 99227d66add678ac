//! Every group of order at most 24, up to isomorphism, built from cyclic
//! groups, products and semidirect products. Dihedral groups are named by
//! their order (`D8` has order 8).

use super::{semidirect_product, FiniteGroup};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub group: FiniteGroup,
}

fn c(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

fn x(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    FiniteGroup::direct_product(a, b)
}

/// `C_m ⋊ C_k` with the generator acting as `t ↦ t^r`.
fn meta(m: usize, r: usize, k: usize) -> FiniteGroup {
    let aut: Vec<u32> = (0..m).map(|i| ((i * r) % m) as u32).collect();
    FiniteGroup::semidirect_cyclic(&c(m), &aut, k).expect("r^k = 1 mod m")
}

/// An abelian `N` extended by `C_2` acting by inversion.
fn generalized_dihedral(n: &FiniteGroup) -> FiniteGroup {
    let inv: Vec<u32> = (0..n.order() as u32).map(|a| n.inv(a)).collect();
    FiniteGroup::semidirect_cyclic(n, &inv, 2).unwrap()
}

fn sl2_3() -> FiniteGroup {
    // action on F_3^2, vector (a, b) at index a + 3b
    let upper: Vec<u32> = (0..9).map(|v| (((v % 3) + (v / 3)) % 3 + 3 * (v / 3)) as u32).collect();
    let rot: Vec<u32> = (0..9).map(|v| ((2 * (v / 3)) % 3 + 3 * (v % 3)) as u32).collect();
    FiniteGroup::from_permutations(9, &[upper, rot], 24).unwrap()
}

/// `(C_4 × C_2) ⋊ C_2`, the second factor acting by `(a, b) ↦ f(a, b)`.
fn c4c2_by_c2(f: impl Fn(usize, usize) -> (usize, usize)) -> FiniteGroup {
    let n = x(&c(4), &c(2));
    let aut: Vec<u32> = (0..8)
        .map(|i| {
            let (a, b) = f(i % 4, i / 4);
            (a % 4 + 4 * (b % 2)) as u32
        })
        .collect();
    FiniteGroup::semidirect_cyclic(&n, &aut, 2).unwrap()
}

/// `C_3 ⋊ D_8` with the reflection subgroup `{1, r², s, sr²}` acting trivially.
fn c3_by_d8() -> FiniteGroup {
    let d8 = FiniteGroup::dihedral(4);
    let action: Vec<Vec<u32>> =
        (0..8).map(|h| if h % 2 == 1 { vec![0, 2, 1] } else { vec![0, 1, 2] }).collect();
    semidirect_product(&c(3), &d8, &action).unwrap().0
}

/// All 74 groups of order at most 24.
pub fn catalog() -> Vec<CatalogEntry> {
    let s3 = FiniteGroup::symmetric(3);
    let d8 = FiniteGroup::dihedral(4);
    let q8 = FiniteGroup::dicyclic(2);
    let a4 = FiniteGroup::alternating(4);
    let c2 = c(2);
    let v4 = x(&c2, &c2);
    let mut out: Vec<(&str, FiniteGroup)> = vec![
        ("C1", c(1)),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("C2xC2", v4.clone()),
        ("C5", c(5)),
        ("C6", c(6)),
        ("S3", s3.clone()),
        ("C7", c(7)),
        ("C8", c(8)),
        ("C4xC2", x(&c(4), &c2)),
        ("C2xC2xC2", x(&v4, &c2)),
        ("D8", d8.clone()),
        ("Q8", q8.clone()),
        ("C9", c(9)),
        ("C3xC3", x(&c(3), &c(3))),
        ("C10", c(10)),
        ("D10", FiniteGroup::dihedral(5)),
        ("C11", c(11)),
        ("C12", c(12)),
        ("C6xC2", x(&c(6), &c2)),
        ("A4", a4.clone()),
        ("D12", FiniteGroup::dihedral(6)),
        ("Dic12", meta(3, 2, 4)),
        ("C13", c(13)),
        ("C14", c(14)),
        ("D14", FiniteGroup::dihedral(7)),
        ("C15", c(15)),
        ("C16", c(16)),
        ("C4xC4", x(&c(4), &c(4))),
        ("(C4xC2):C2", c4c2_by_c2(|a, b| (a, a + b))),
        ("C4:C4", meta(4, 3, 4)),
        ("C8xC2", x(&c(8), &c2)),
        ("M16", meta(8, 5, 2)),
        ("D16", FiniteGroup::dihedral(8)),
        ("SD16", meta(8, 3, 2)),
        ("Q16", FiniteGroup::dicyclic(4)),
        ("C4xC2xC2", x(&c(4), &v4)),
        ("C2xD8", x(&c2, &d8)),
        ("C2xQ8", x(&c2, &q8)),
        ("Pauli", c4c2_by_c2(|a, b| (a + 2 * b, b))),
        ("C2^4", x(&v4, &v4)),
        ("C17", c(17)),
        ("C18", c(18)),
        ("C6xC3", x(&c(6), &c(3))),
        ("D18", FiniteGroup::dihedral(9)),
        ("S3xC3", x(&s3, &c(3))),
        ("(C3xC3):C2", generalized_dihedral(&x(&c(3), &c(3)))),
        ("C19", c(19)),
        ("C20", c(20)),
        ("C10xC2", x(&c(10), &c2)),
        ("D20", FiniteGroup::dihedral(10)),
        ("Dic20", meta(5, 4, 4)),
        ("F20", meta(5, 2, 4)),
        ("C21", c(21)),
        ("C7:C3", meta(7, 2, 3)),
        ("C22", c(22)),
        ("D22", FiniteGroup::dihedral(11)),
        ("C23", c(23)),
        ("C3:C8", meta(3, 2, 8)),
        ("C24", c(24)),
        ("SL(2,3)", sl2_3()),
        ("Dic24", FiniteGroup::dicyclic(6)),
        ("C4xS3", x(&c(4), &s3)),
        ("D24", FiniteGroup::dihedral(12)),
        ("C2xDic12", x(&c2, &meta(3, 2, 4))),
        ("C3:D8", c3_by_d8()),
        ("C12xC2", x(&c(12), &c2)),
        ("C3xD8", x(&c(3), &d8)),
        ("C3xQ8", x(&c(3), &q8)),
        ("S4", FiniteGroup::symmetric(4)),
        ("C2xA4", x(&c2, &a4)),
        ("C2xC2xS3", x(&v4, &s3)),
        ("C6xC2xC2", x(&c(6), &v4)),
    ];
    out.sort_by_key(|(_, g)| g.order());
    out.into_iter().map(|(name, group)| CatalogEntry { name: name.to_string(), group }).collect()
}

#[cfg(test)]
mod tests {
    use super::super::are_isomorphic;
    use super::*;

    #[test]
    fn catalog_is_complete_and_irredundant() {
        // number of isomorphism classes of groups of order 1..=24
        const COUNTS: [usize; 24] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15];
        let cat = catalog();
        for n in 1..=24 {
            let of_order: Vec<&CatalogEntry> = cat.iter().filter(|e| e.group.order() == n).collect();
            assert_eq!(of_order.len(), COUNTS[n - 1], "order {n}");
            for (i, a) in of_order.iter().enumerate() {
                for b in &of_order[i + 1..] {
                    assert!(!are_isomorphic(&a.group, &b.group), "{} ≅ {}", a.name, b.name);
                }
            }
        }
    }
}
