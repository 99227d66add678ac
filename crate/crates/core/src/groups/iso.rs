//! Isomorphism search by backtracking over generator images.

use super::FiniteGroup;

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut v: Vec<usize> = (0..g.order() as u32).map(|x| g.element_order(x)).collect();
    v.sort_unstable();
    v
}

/// Extend `gens[i] ↦ imgs[i]` along the right Cayley graph. Returns the
/// full map if it is well defined and bijective, which makes it an
/// isomorphism.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[u32], imgs: &[u32]) -> Option<Vec<u32>> {
    let n = g.order();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x as usize], t);
            if map[y as usize] == u32::MAX {
                if used[fy as usize] {
                    return None;
                }
                used[fy as usize] = true;
                map[y as usize] = fy;
                queue.push(y);
            } else if map[y as usize] != fy {
                return None;
            }
        }
        i += 1;
    }
    (queue.len() == n).then_some(map)
}

/// An isomorphism `g → h` as an image list, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<u32>> {
    if g.order() != h.order() || order_profile(g) != order_profile(h) {
        return None;
    }
    let gens = g.generators(&g.whole());
    let cands: Vec<Vec<u32>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..h.order() as u32).filter(|&t| h.element_order(t) == o).collect()
        })
        .collect();
    let mut imgs = vec![0u32; gens.len()];
    fn search(
        depth: usize,
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[u32],
        cands: &[Vec<u32>],
        imgs: &mut Vec<u32>,
    ) -> Option<Vec<u32>> {
        if depth == gens.len() {
            return extend(g, h, gens, imgs);
        }
        for &t in &cands[depth] {
            imgs[depth] = t;
            // the partial assignment must already be consistent on the
            // subgroup it generates
            let sub = &gens[..=depth];
            let g_sub = g.generate(sub);
            let h_sub = h.generate(&imgs[..=depth]);
            if g_sub.len() != h_sub.len() {
                continue;
            }
            if let Some(m) = search(depth + 1, g, h, gens, cands, imgs) {
                return Some(m);
            }
        }
        None
    }
    search(0, g, h, &gens, &cands, &mut imgs)
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn found_maps_are_isomorphisms() {
        let d3 = FiniteGroup::dihedral(3);
        let s3 = FiniteGroup::symmetric(3);
        let m = find_isomorphism(&d3, &s3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(m[d3.mul(a, b) as usize], s3.mul(m[a as usize], m[b as usize]));
            }
        }
        assert!(!are_isomorphic(&FiniteGroup::cyclic(6), &s3));
        assert!(!are_isomorphic(&FiniteGroup::dihedral(4), &FiniteGroup::dicyclic(2)));
    }
}
