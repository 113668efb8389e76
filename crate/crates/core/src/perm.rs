//! Permutations of `0..n` and a Schreier–Sims stabilizer chain.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Wraps an image array, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if std::mem::replace(seen.get_mut(x as usize)?, true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_some());
        Permutation(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    /// First point moved, if any.
    pub fn first_moved(&self) -> Option<u32> {
        self.0
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }
}

/// Orbit of `point` under the group generated by `gens`.
pub fn orbit(point: u32, gens: &[Permutation]) -> Vec<u32> {
    let mut seen = std::collections::HashSet::from([point]);
    let mut out = vec![point];
    let mut queue = VecDeque::from([point]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if seen.insert(q) {
                out.push(q);
                queue.push_back(q);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Orbit partition of `0..n` under `gens`, as a representative per point
/// (the least point of its orbit).
pub fn orbit_representatives(n: usize, gens: &[Permutation]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    for g in gens {
        for i in 0..n as u32 {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..n as u32).map(|i| find(&mut parent, i)).collect()
}

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    /// orbit point ↦ element mapping `base` to it
    transversal: HashMap<u32, Permutation>,
}

impl Level {
    fn new(base: u32) -> Self {
        Level {
            base,
            gens: Vec::new(),
            transversal: HashMap::new(),
        }
    }

    fn rebuild(&mut self, n: usize) {
        self.transversal.clear();
        self.transversal.insert(self.base, Permutation::identity(n));
        let mut queue = VecDeque::from([self.base]);
        while let Some(p) = queue.pop_front() {
            let tp = self.transversal[&p].clone();
            for g in &self.gens {
                let q = g.apply(p);
                if let std::collections::hash_map::Entry::Vacant(slot) = self.transversal.entry(q) {
                    slot.insert(g.compose(&tp));
                    queue.push_back(q);
                }
            }
        }
    }

    fn orbit_points(&self) -> Vec<u32> {
        let mut pts: Vec<u32> = self.transversal.keys().copied().collect();
        pts.sort_unstable();
        pts
    }
}

/// Base and strong generating set for a permutation group.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Deterministic Schreier–Sims on the group generated by `gens`.
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            let (residue, drop) = chain.sift(g, 0);
            if !residue.is_identity() {
                chain.insert(residue, 0, drop);
            }
        }
        while let Some((residue, from, drop)) = chain.find_failing_schreier_generator() {
            chain.insert(residue, from, drop);
        }
        chain
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where it dropped out (`levels.len()` if it passed every level).
    fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let image = h.apply(level.base);
            match level.transversal.get(&image) {
                Some(t) => h = t.inverse().compose(&h),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Adds a non-identity residue to levels `from..=drop`, creating a new
    /// level if it fixes every base point.
    fn insert(&mut self, residue: Permutation, from: usize, drop: usize) {
        if drop == self.levels.len() {
            let base = residue.first_moved().expect("non-identity residue");
            self.levels.push(Level::new(base));
        }
        for level in &mut self.levels[from..=drop] {
            level.gens.push(residue.clone());
            level.rebuild(self.degree);
        }
    }

    fn find_failing_schreier_generator(&self) -> Option<(Permutation, usize, usize)> {
        for (j, level) in self.levels.iter().enumerate() {
            for p in level.orbit_points() {
                let tp = &level.transversal[&p];
                for s in &level.gens {
                    let q = s.apply(p);
                    let h = level.transversal[&q].inverse().compose(&s.compose(tp));
                    let (residue, drop) = self.sift(&h, j + 1);
                    if !residue.is_identity() {
                        return Some((residue, j + 1, drop));
                    }
                }
            }
        }
        None
    }

    /// Group order as the product of basic orbit lengths; `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.transversal.len() as u128))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }
}

/// Closure of `gens` under composition, sorted; `None` once more than `cap`
/// elements have been found.
pub fn enumerate_group(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if !seen.contains(&q) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    let mut all: Vec<Permutation> = seen.into_iter().collect();
    all.sort();
    Some(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[u32]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn compose_and_inverse() {
        let a = p(&[1, 2, 0]);
        let b = p(&[1, 0, 2]);
        assert_eq!(a.compose(&b).images(), &[2, 1, 0]);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
    }

    #[test]
    fn schreier_sims_orders() {
        // S_n from a transposition and an n-cycle
        for n in 2..=7u32 {
            let cycle = p(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
            let mut t: Vec<u32> = (0..n).collect();
            t.swap(0, 1);
            let chain = StabilizerChain::new(n as usize, &[cycle, p(&t)]);
            assert_eq!(chain.order(), Some((1..=n as u128).product()));
        }
        // dihedral group of the square
        let rot = p(&[1, 2, 3, 0]);
        let refl = p(&[0, 3, 2, 1]);
        let chain = StabilizerChain::new(4, &[rot.clone(), refl]);
        assert_eq!(chain.order(), Some(8));
        assert!(chain.contains(&p(&[2, 1, 0, 3])));
        assert!(!chain.contains(&p(&[1, 0, 2, 3])));
        assert_eq!(StabilizerChain::new(4, &[]).order(), Some(1));
        assert_eq!(StabilizerChain::new(4, &[rot]).order(), Some(4));
    }

    #[test]
    fn enumeration_matches_chain_order() {
        let gens = [p(&[1, 2, 3, 4, 0]), p(&[0, 4, 3, 2, 1])];
        let all = enumerate_group(5, &gens, 1000).unwrap();
        assert_eq!(
            all.len() as u128,
            StabilizerChain::new(5, &gens).order().unwrap()
        );
        assert!(all[0].is_identity());
        assert!(enumerate_group(5, &gens, 5).is_none());
    }

    #[test]
    fn orbits() {
        let gens = [p(&[1, 0, 2, 4, 3])];
        assert_eq!(orbit(3, &gens), vec![3, 4]);
        assert_eq!(orbit_representatives(5, &gens), vec![0, 0, 2, 3, 3]);
    }
}
