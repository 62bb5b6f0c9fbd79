//! Permutation groups with cached stabilizer chains, canonical images of
//! point sets and setwise stabilizers.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::{Level, ProductReplacement, StabChain};
use super::perm::Perm;

/// A set image and the path of (chain, point) choices that produced it.
type Candidate = (Vec<u32>, Vec<(Arc<StabChain>, u32)>);

const NODE_CACHE_LIMIT: usize = 1 << 16;

/// The pointwise stabilizer of a sequence of points, with its orbit minima.
struct Node {
    chain: StabChain,
    minima: Vec<u32>,
    /// Chains of the same group whose first base point is the key.
    rebased: Mutex<HashMap<u32, Arc<StabChain>>>,
}

impl Node {
    fn new(chain: StabChain) -> Self {
        let minima = chain.orbit_minima();
        Node { chain, minima, rebased: Mutex::new(HashMap::new()) }
    }

    fn moves(&self, p: u32) -> bool {
        self.chain.generators().iter().any(|g| g.apply(p) != p)
    }
}

pub struct PermGroup {
    degree: usize,
    chain: StabChain,
    seed: u64,
    nodes: Mutex<HashMap<Vec<u32>, Arc<Node>>>,
}

/// Result of a setwise stabilizer computation.
#[derive(Clone, Debug)]
pub struct SetStabilizer {
    pub order: BigUint,
    pub generators: Vec<Perm>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.degree).field("order", &self.order()).finish()
    }
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::from_chain(self.chain.clone(), self.seed)
    }
}

impl PermGroup {
    fn from_chain(chain: StabChain, seed: u64) -> Self {
        PermGroup { degree: chain.degree(), chain, seed, nodes: Mutex::new(HashMap::new()) }
    }

    /// Group generated by `gens`, via deterministic Schreier–Sims.
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        PermGroup::from_chain(StabChain::schreier_sims(degree, gens, &[]), 0)
    }

    /// Group generated by `gens` whose order is known in advance. Random
    /// elements drive the construction; the answer is exact regardless of
    /// `seed`, only the chosen strong generators depend on it.
    pub fn with_order(degree: usize, gens: &[Perm], order: &BigUint, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pr = ProductReplacement::new(degree, gens, &mut rng);
        let chain = StabChain::from_random(degree, gens, order, &[], || pr.next(&mut rng));
        PermGroup::from_chain(chain, seed)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::from_chain(StabChain::trivial(degree), 0)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn generators(&self) -> &[Perm] {
        self.chain.generators()
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain.random_element(rng)
    }

    /// All elements; only sensible for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        self.chain.elements()
    }

    /// Orbit of a point.
    pub fn orbit(&self, p: u32) -> Vec<u32> {
        let min = self.node(&[]).minima.clone();
        let m = min[p as usize];
        (0..self.degree as u32).filter(|&q| min[q as usize] == m).collect()
    }

    /// Orbit of a set, as sorted sets in sorted order.
    pub fn set_orbit(&self, set: &[u32]) -> Vec<Vec<u32>> {
        let mut start = set.to_vec();
        start.sort_unstable();
        let mut seen = std::collections::BTreeSet::from([start.clone()]);
        let mut queue = vec![start];
        while let Some(s) = queue.pop() {
            for g in self.generators() {
                let t = g.apply_set(&s);
                if seen.insert(t.clone()) {
                    queue.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn prefix_seed(&self, prefix: &[u32]) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.seed.hash(&mut h);
        prefix.hash(&mut h);
        h.finish()
    }

    fn node(&self, prefix: &[u32]) -> Arc<Node> {
        if let Some(n) = self.nodes.lock().expect("cache lock").get(prefix) {
            return n.clone();
        }
        let node = match prefix.split_last() {
            None => Arc::new(Node::new(self.chain.clone())),
            Some((&q, rest)) => {
                let parent = self.node(rest);
                if !parent.moves(q) {
                    Arc::new(Node::new(parent.chain.clone()))
                } else {
                    let rebased = self.rebased(&parent, rest, q);
                    Arc::new(Node::new(rebased.tail(1)))
                }
            }
        };
        let mut cache = self.nodes.lock().expect("cache lock");
        if cache.len() < NODE_CACHE_LIMIT {
            cache.entry(prefix.to_vec()).or_insert_with(|| node.clone());
        }
        node
    }

    /// Chain of the node's group with first base point `q` (which it moves).
    fn rebased(&self, node: &Node, prefix: &[u32], q: u32) -> Arc<StabChain> {
        if let Some(c) = node.rebased.lock().expect("cache lock").get(&q) {
            return c.clone();
        }
        let mut key = prefix.to_vec();
        key.push(q);
        let mut rng = ChaCha8Rng::seed_from_u64(self.prefix_seed(&key));
        let chain = Arc::new(node.chain.rebase(&[q], &mut rng));
        node.rebased.lock().expect("cache lock").entry(q).or_insert_with(|| chain.clone());
        chain
    }

    /// The lexicographically least image of `set` (as a sorted sequence)
    /// under the group.
    pub fn canonical_image(&self, set: &[u32]) -> Vec<u32> {
        self.canonical_image_with_element(set).0
    }

    /// Canonical image together with an element mapping `set` onto it.
    pub fn canonical_image_with_element(&self, set: &[u32]) -> (Vec<u32>, Perm) {
        let mut start = set.to_vec();
        start.sort_unstable();
        start.dedup();
        // Each candidate carries the inverse of the element that produced it.
        let mut cands: Vec<Candidate> = vec![(start, Vec::new())];
        let mut prefix: Vec<u32> = Vec::new();
        loop {
            let node = self.node(&prefix);
            if node.chain.levels().is_empty() || prefix.len() == cands[0].0.len() {
                let best = cands.into_iter().min_by(|a, b| a.0.cmp(&b.0)).expect("candidate");
                let elem = self.word_to_perm(&best.1);
                return (best.0, elem);
            }
            let mut q = u32::MAX;
            for (c, _) in &cands {
                for &t in c {
                    if prefix.binary_search(&t).is_err() {
                        q = q.min(node.minima[t as usize]);
                    }
                }
            }
            debug_assert_ne!(q, u32::MAX);
            let mut next = Vec::new();
            if node.moves(q) {
                let chain = self.rebased(&node, &prefix, q);
                let level = &chain.levels()[0];
                for (c, word) in &cands {
                    for &t in c {
                        if node.minima[t as usize] != q || prefix.binary_search(&t).is_ok() {
                            continue;
                        }
                        let mut img: Vec<u32> = c.iter().map(|&x| level.apply_rep_inv(t, x)).collect();
                        img.sort_unstable();
                        let mut w = word.clone();
                        w.push((chain.clone(), t));
                        next.push((img, w));
                    }
                }
            } else {
                next = cands.into_iter().filter(|(c, _)| c.binary_search(&q).is_ok()).collect();
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            next.dedup_by(|a, b| a.0 == b.0);
            cands = next;
            prefix.push(q);
        }
    }

    fn word_to_perm(&self, word: &[(Arc<StabChain>, u32)]) -> Perm {
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for (chain, t) in word {
            let level = &chain.levels()[0];
            images.iter_mut().for_each(|x| *x = level.apply_rep_inv(*t, *x));
        }
        Perm::from_images_unchecked(images)
    }

    /// Setwise stabilizer of `set`, by backtracking over a base whose points
    /// are taken from `set`.
    pub fn set_stabilizer(&self, set: &[u32]) -> SetStabilizer {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        let mut in_s = vec![false; self.degree];
        s.iter().for_each(|&x| in_s[x as usize] = true);

        let mut prefix: Vec<u32> = Vec::new();
        let mut levels: Vec<Arc<Level>> = Vec::new();
        loop {
            let node = self.node(&prefix);
            let Some(&b) = s.iter().find(|&&x| node.moves(x)) else { break };
            let chain = self.rebased(&node, &prefix, b);
            levels.push(chain.levels()[0].clone());
            prefix.push(b);
        }
        let tail = self.node(&prefix);
        let mut gens: Vec<Perm> = tail.chain.generators().to_vec();
        let mut order = tail.chain.order();

        let search = Search { levels: &levels, set: &s, degree: self.degree };
        for i in (0..levels.len()).rev() {
            let level = &levels[i];
            let mut reached = orbit_bitmap(self.degree, &gens, level.base());
            let mut targets: Vec<u32> = level.orbit().iter().copied().filter(|&p| in_s[p as usize]).collect();
            targets.sort_unstable();
            for beta in targets {
                if reached[beta as usize] {
                    continue;
                }
                if let Some(sigma) = search.find(i, beta) {
                    gens.push(sigma);
                    reached = orbit_bitmap(self.degree, &gens, level.base());
                }
            }
            order *= BigUint::from(reached.iter().filter(|&&r| r).count());
        }
        gens.retain(|g| !g.is_identity());
        SetStabilizer { order, generators: gens }
    }

    pub fn stabilizer_order(&self, set: &[u32]) -> BigUint {
        self.set_stabilizer(set).order
    }

    /// Size of the orbit of `set`.
    pub fn orbit_size(&self, set: &[u32]) -> BigUint {
        let order = self.order();
        let stab = self.stabilizer_order(set);
        assert!(
            (&order % &stab) == BigUint::from(0u32),
            "stabilizer order does not divide the group order"
        );
        order / stab
    }

    /// The action of `gens` (which must map the sorted set `points` onto
    /// itself) relabelled onto `0..points.len()`.
    pub fn restricted(points: &[u32], gens: &[Perm]) -> PermGroup {
        let local: Vec<Perm> = gens
            .iter()
            .map(|g| g.restrict(points).expect("generator does not preserve the point set"))
            .filter(|g| !g.is_identity())
            .collect();
        PermGroup::new(points.len(), &local)
    }
}

fn orbit_bitmap(degree: usize, gens: &[Perm], start: u32) -> Vec<bool> {
    let mut seen = vec![false; degree];
    seen[start as usize] = true;
    let mut queue = vec![start];
    while let Some(p) = queue.pop() {
        for g in gens {
            let q = g.apply(p);
            if !seen[q as usize] {
                seen[q as usize] = true;
                queue.push(q);
            }
        }
    }
    seen
}

struct Search<'a> {
    levels: &'a [Arc<Level>],
    set: &'a [u32],
    degree: usize,
}

impl Search<'_> {
    /// An element of the level-`i` group mapping its base point to `beta`
    /// and the set onto itself.
    fn find(&self, i: usize, beta: u32) -> Option<Perm> {
        let level = &self.levels[i];
        let target: Vec<u32> = self.set.iter().map(|&x| level.apply_rep_inv(beta, x)).collect();
        let mut path = Vec::with_capacity(self.levels.len());
        if !self.descend(i + 1, target, &mut path) {
            return None;
        }
        path.push((i, beta));
        // path lists the deepest level first.
        let mut images: Vec<u32> = (0..self.degree as u32).collect();
        for &(j, p) in &path {
            let level = &self.levels[j];
            images.iter_mut().for_each(|x| *x = level.apply_rep(p, *x));
        }
        Some(Perm::from_images_unchecked(images))
    }

    /// Searches for an element of the level-`j` group mapping the set onto
    /// `target`.
    fn descend(&self, j: usize, mut target: Vec<u32>, path: &mut Vec<(usize, u32)>) -> bool {
        if j == self.levels.len() {
            target.sort_unstable();
            return target == self.set;
        }
        let level = &self.levels[j];
        let mut choices: Vec<u32> = target.iter().copied().filter(|&p| level.in_orbit(p)).collect();
        choices.sort_unstable();
        for gamma in choices {
            let next: Vec<u32> = target.iter().map(|&x| level.apply_rep_inv(gamma, x)).collect();
            // Base points already fixed must stay in the image.
            if !self.levels[..j].iter().all(|l| next.contains(&l.base())) {
                continue;
            }
            if self.descend(j + 1, next, path) {
                path.push((j, gamma));
                return true;
            }
        }
        false
    }
}

/// Convenience: order of the group generated by `gens`.
pub fn group_order(degree: usize, gens: &[Perm]) -> BigUint {
    if gens.iter().all(Perm::is_identity) {
        return BigUint::one();
    }
    StabChain::schreier_sims(degree, gens, &[]).order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> Vec<Perm> {
        let mut cycle: Vec<u32> = (1..n as u32).collect();
        cycle.push(0);
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, 1);
        vec![Perm::from_images(cycle).unwrap(), Perm::from_images(swap).unwrap()]
    }

    fn brute_canonical(g: &PermGroup, set: &[u32]) -> Vec<u32> {
        g.elements().iter().map(|e| e.apply_set(set)).min().unwrap()
    }

    fn brute_stab(g: &PermGroup, set: &[u32]) -> usize {
        let mut s = set.to_vec();
        s.sort_unstable();
        g.elements().iter().filter(|e| e.apply_set(set) == s).count()
    }

    #[test]
    fn symmetric_group_canonical_and_stabilizer() {
        let g = PermGroup::new(6, &sym(6));
        assert_eq!(g.canonical_image(&[4, 2, 5]), vec![0, 1, 2]);
        assert_eq!(g.stabilizer_order(&[4, 2, 5]), BigUint::from(36u32));
        assert_eq!(g.orbit_size(&[1, 3]), BigUint::from(15u32));
    }

    #[test]
    fn matches_brute_force_on_cyclic_action() {
        // Cyclic group of order 8 acting on 8 points, plus a reflection.
        let rot = Perm::from_images((0..8).map(|i| (i + 1) % 8).collect()).unwrap();
        let refl = Perm::from_images((0..8).map(|i| (8 - i) % 8).collect()).unwrap();
        let g = PermGroup::new(8, &[rot, refl]);
        assert_eq!(g.order(), BigUint::from(16u32));
        for set in [vec![1, 2, 5], vec![0, 4], vec![3, 5, 6, 7], vec![2]] {
            assert_eq!(g.canonical_image(&set), brute_canonical(&g, &set), "{set:?}");
            assert_eq!(g.stabilizer_order(&set), BigUint::from(brute_stab(&g, &set)), "{set:?}");
        }
    }

    #[test]
    fn canonical_element_maps_set_to_image() {
        let g = PermGroup::new(7, &sym(7));
        let set = [6, 3, 4];
        let (img, e) = g.canonical_image_with_element(&set);
        assert_eq!(e.apply_set(&set), img);
    }
}
