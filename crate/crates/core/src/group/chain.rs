//! Stabilizer chains (base and strong generating set) with Schreier vectors.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::perm::Perm;

const NOT_IN_ORBIT: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

/// One level of a stabilizer chain: the group `G_i` fixing the earlier base
/// points, given by generators, and the orbit of `base` under it.
#[derive(Clone)]
pub struct Level {
    pub(crate) base: u32,
    pub(crate) gens: Vec<Perm>,
    pub(crate) gens_inv: Vec<Perm>,
    pub(crate) orbit: Vec<u32>,
    /// For an orbit point `p`, the index of the generator that reached it
    /// from its parent; `ROOT` at the base point.
    pub(crate) edge: Vec<u32>,
}

impl Level {
    fn new(degree: usize, base: u32, gens: Vec<Perm>) -> Self {
        let gens_inv = gens.iter().map(Perm::inverse).collect();
        let mut level = Level { base, gens, gens_inv, orbit: Vec::new(), edge: vec![NOT_IN_ORBIT; degree] };
        level.rebuild_orbit();
        level
    }

    fn push_generator(&mut self, g: Perm) {
        self.gens_inv.push(g.inverse());
        self.gens.push(g);
        self.rebuild_orbit();
    }

    fn rebuild_orbit(&mut self) {
        self.edge.iter_mut().for_each(|e| *e = NOT_IN_ORBIT);
        self.orbit.clear();
        self.edge[self.base as usize] = ROOT;
        self.orbit.push(self.base);
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            head += 1;
            for (k, g) in self.gens.iter().enumerate() {
                let q = g.apply(p);
                if self.edge[q as usize] == NOT_IN_ORBIT {
                    self.edge[q as usize] = k as u32;
                    self.orbit.push(q);
                }
            }
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn orbit(&self) -> &[u32] {
        &self.orbit
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    #[inline]
    pub fn in_orbit(&self, p: u32) -> bool {
        self.edge[p as usize] != NOT_IN_ORBIT
    }

    /// Applies `u_p^{-1}` to `x`, where `u_p` is the transversal element
    /// mapping the base point to `p`.
    pub fn apply_rep_inv(&self, mut p: u32, mut x: u32) -> u32 {
        loop {
            let e = self.edge[p as usize];
            debug_assert_ne!(e, NOT_IN_ORBIT);
            if e == ROOT {
                return x;
            }
            let inv = &self.gens_inv[e as usize];
            x = inv.apply(x);
            p = inv.apply(p);
        }
    }

    fn path(&self, mut p: u32) -> Vec<u32> {
        let mut path = Vec::new();
        loop {
            let e = self.edge[p as usize];
            if e == ROOT {
                break;
            }
            path.push(e);
            p = self.gens_inv[e as usize].apply(p);
        }
        path.reverse();
        path
    }

    /// Applies `u_p` to `x`.
    pub fn apply_rep(&self, p: u32, mut x: u32) -> u32 {
        for e in self.path(p) {
            x = self.gens[e as usize].apply(x);
        }
        x
    }

    /// The transversal element `u_p` as a full permutation.
    pub fn rep(&self, p: u32) -> Perm {
        let degree = self.edge.len();
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for e in self.path(p) {
            let g = &self.gens[e as usize];
            images.iter_mut().for_each(|x| *x = g.apply(*x));
        }
        Perm::from_images_unchecked(images)
    }

    /// `h` followed by `u_p^{-1}`.
    fn strip(&self, h: &Perm, p: u32) -> Perm {
        let mut images = h.images().to_vec();
        let mut q = p;
        loop {
            let e = self.edge[q as usize];
            if e == ROOT {
                break;
            }
            let inv = &self.gens_inv[e as usize];
            images.iter_mut().for_each(|x| *x = inv.apply(*x));
            q = inv.apply(q);
        }
        Perm::from_images_unchecked(images)
    }
}

/// A stabilizer chain. Levels are shared so that tails are cheap.
#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Arc<Level>>,
}

impl StabChain {
    pub fn trivial(degree: usize) -> Self {
        StabChain { degree, levels: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Arc<Level>] {
        &self.levels
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Generators of the whole group described by the chain.
    pub fn generators(&self) -> &[Perm] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// The chain of the stabilizer of the first `k` base points.
    pub fn tail(&self, k: usize) -> StabChain {
        StabChain { degree: self.degree, levels: self.levels[k.min(self.levels.len())..].to_vec() }
    }

    /// Sifts `g`; returns the residue and the level where sifting stopped
    /// (`levels.len()` when it passed every level).
    fn sift(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let p = h.apply(level.base);
            if !level.in_orbit(p) {
                return (h, i);
            }
            h = level.strip(&h, p);
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    /// Uniformly random element, as a product of random transversal elements.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for level in self.levels.iter().rev() {
            let p = level.orbit[rng.gen_range(0..level.orbit.len())];
            let rep = level.rep(p);
            images.iter_mut().for_each(|x| *x = rep.apply(*x));
        }
        Perm::from_images_unchecked(images)
    }

    /// Every element, in a deterministic order. Only for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let reps: Vec<Perm> = level.orbit.iter().map(|&p| level.rep(p)).collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for u in &reps {
                for h in &out {
                    next.push(h.then(u));
                }
            }
            out = next;
        }
        out
    }

    /// Adds a residue found at level `j` as a strong generator, creating a new
    /// level when it fixes every base point.
    fn absorb(&mut self, residue: Perm, from: usize, j: usize) {
        if j == self.levels.len() {
            let b = residue.first_moved().expect("nontrivial residue");
            self.levels.push(Arc::new(Level::new(self.degree, b, Vec::new())));
        }
        for level in &mut self.levels[from..=j] {
            Arc::make_mut(level).push_generator(residue.clone());
        }
    }

    fn with_prefix(degree: usize, prefix: &[u32]) -> Self {
        StabChain {
            degree,
            levels: prefix.iter().map(|&b| Arc::new(Level::new(degree, b, Vec::new()))).collect(),
        }
    }

    /// Drops trailing levels with trivial orbit, keeping the first `keep`.
    fn trim(&mut self, keep: usize) {
        while self.levels.len() > keep && self.levels.last().is_some_and(|l| l.orbit.len() == 1) {
            self.levels.pop();
        }
    }

    /// Makes level 0 carry every input generator, so the chain's generators
    /// generate the whole group.
    fn include_generators(&mut self, gens: &[Perm]) {
        if let Some(first) = self.levels.first_mut() {
            let lvl = Arc::make_mut(first);
            for g in gens.iter().filter(|g| !g.is_identity()) {
                if !lvl.gens.contains(g) {
                    lvl.gens_inv.push(g.inverse());
                    lvl.gens.push(g.clone());
                }
            }
            lvl.rebuild_orbit();
        }
    }

    /// Deterministic Schreier–Sims. The base starts with `prefix`.
    pub fn schreier_sims(degree: usize, gens: &[Perm], prefix: &[u32]) -> Self {
        let mut chain = StabChain::with_prefix(degree, prefix);
        for g in gens.iter().filter(|g| !g.is_identity()) {
            let (res, j) = chain.sift(g, 0);
            if !res.is_identity() {
                chain.absorb(res, 0, j);
            }
        }
        chain.include_generators(gens);
        let mut i = chain.levels.len();
        while i > 0 {
            let level_idx = i - 1;
            match chain.find_missing_schreier(level_idx) {
                Some((res, j)) => {
                    chain.absorb(res, level_idx + 1, j);
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
        chain.trim(prefix.len());
        chain
    }

    /// Looks for a Schreier generator of level `i` that does not sift
    /// through the levels below it.
    fn find_missing_schreier(&self, i: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[i];
        for &p in &level.orbit {
            let up = level.rep(p);
            for g in &level.gens {
                let q = g.apply(p);
                let s = level.strip(&up.then(g), q);
                if s.is_identity() {
                    continue;
                }
                let (res, j) = self.sift(&s, i + 1);
                if !res.is_identity() {
                    return Some((res, j));
                }
            }
        }
        None
    }

    /// Randomized Schreier–Sims for a group of known order. The result is
    /// exact: sampling stops only once the chain reaches `order`.
    /// `sample` must return (close to) uniformly random group elements.
    pub fn from_random(
        degree: usize,
        gens: &[Perm],
        order: &BigUint,
        prefix: &[u32],
        mut sample: impl FnMut() -> Perm,
    ) -> Self {
        let mut chain = StabChain::with_prefix(degree, prefix);
        let mut pending: Vec<Perm> = gens.to_vec();
        while chain.order() < *order {
            let g = pending.pop().unwrap_or_else(&mut sample);
            let (res, j) = chain.sift(&g, 0);
            if !res.is_identity() {
                chain.absorb(res, 0, j);
            }
        }
        assert_eq!(chain.order(), *order, "group order exceeded the stated order");
        chain.include_generators(gens);
        chain.trim(prefix.len());
        chain
    }

    /// A chain for the same group whose base begins with `prefix`.
    pub fn rebase<R: Rng + ?Sized>(&self, prefix: &[u32], rng: &mut R) -> StabChain {
        if self.base().starts_with(prefix) {
            return self.clone();
        }
        let order = self.order();
        let gens = self.generators().to_vec();
        StabChain::from_random(self.degree, &gens, &order, prefix, || self.random_element(rng))
    }

    /// Orbit representatives: `min[p]` is the smallest point in the orbit of `p`.
    pub fn orbit_minima(&self) -> Vec<u32> {
        orbit_minima(self.degree, self.generators())
    }
}

/// For each point the least point of its orbit under `gens`.
pub fn orbit_minima(degree: usize, gens: &[Perm]) -> Vec<u32> {
    let mut min = vec![NOT_IN_ORBIT; degree];
    let mut queue = Vec::new();
    for start in 0..degree as u32 {
        if min[start as usize] != NOT_IN_ORBIT {
            continue;
        }
        min[start as usize] = start;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for g in gens {
                let q = g.apply(p);
                if min[q as usize] == NOT_IN_ORBIT {
                    min[q as usize] = start;
                    queue.push(q);
                }
            }
        }
    }
    min
}

/// Product-replacement generator of random elements from generators alone.
pub struct ProductReplacement {
    slots: Vec<Perm>,
    acc: Perm,
}

impl ProductReplacement {
    pub fn new<R: Rng + ?Sized>(degree: usize, gens: &[Perm], rng: &mut R) -> Self {
        let mut slots: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if slots.is_empty() {
            slots.push(Perm::identity(degree));
        }
        let base = slots.clone();
        while slots.len() < 10 {
            slots.push(base[slots.len() % base.len()].clone());
        }
        let mut pr = ProductReplacement { slots, acc: Perm::identity(degree) };
        for _ in 0..60 {
            pr.next(rng);
        }
        pr
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Perm {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let right = rng.gen_bool(0.5);
        let inv = rng.gen_bool(0.5);
        let other = if inv { self.slots[j].inverse() } else { self.slots[j].clone() };
        self.slots[i] = if right { self.slots[i].then(&other) } else { other.then(&self.slots[i]) };
        self.acc = self.acc.then(&self.slots[i]);
        self.acc.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(n: usize) -> Vec<Perm> {
        let mut cycle: Vec<u32> = (1..n as u32).collect();
        cycle.push(0);
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, 1);
        vec![Perm::from_images(cycle).unwrap(), Perm::from_images(swap).unwrap()]
    }

    #[test]
    fn symmetric_group_order() {
        let c = StabChain::schreier_sims(6, &sym(6), &[]);
        assert_eq!(c.order(), BigUint::from(720u32));
        assert_eq!(c.elements().len(), 720);
    }

    #[test]
    fn random_version_and_rebase() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gens = sym(7);
        let order = BigUint::from(5040u32);
        let mut pr = ProductReplacement::new(7, &gens, &mut rng);
        let mut rng2 = ChaCha8Rng::seed_from_u64(8);
        let c = StabChain::from_random(7, &gens, &order, &[], || pr.next(&mut rng2));
        assert_eq!(c.order(), order);
        let r = c.rebase(&[5, 3], &mut rng);
        assert_eq!(&r.base()[..2], &[5, 3]);
        assert_eq!(r.order(), order);
        assert_eq!(r.tail(2).order(), BigUint::from(120u32));
    }

    #[test]
    fn membership() {
        let gens = vec![Perm::from_images(vec![1, 2, 3, 0]).unwrap()];
        let c = StabChain::schreier_sims(4, &gens, &[]);
        assert_eq!(c.order(), BigUint::from(4u32));
        assert!(c.contains(&Perm::from_images(vec![2, 3, 0, 1]).unwrap()));
        assert!(!c.contains(&Perm::from_images(vec![1, 0, 2, 3]).unwrap()));
    }
}
