//! Integer set partitions with minimal-element representatives.
//!
//! A partition of `{0..n-1}` models a substitution over context names: all
//! elements of a class are unified and the class representative is its
//! minimum. Coarsening enumeration drives the brute-force possible-worlds
//! oracle.

/// A partition of `{0..n-1}` into disjoint classes, stored as a union-find
/// forest whose roots are always the class minima.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    /// The discrete partition: every element is its own class.
    pub fn discrete(n: usize) -> Partition {
        Partition {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Representative (minimum) of the class containing `i`.
    pub fn rep(&self, i: usize) -> usize {
        assert!(i < self.parent.len(), "element {i} out of range");
        let mut cur = i;
        while self.parent[cur] != cur {
            cur = self.parent[cur];
        }
        cur
    }

    /// A new partition with the classes of `i` and `j` merged.
    pub fn join(&self, i: usize, j: usize) -> Partition {
        let ri = self.rep(i);
        let rj = self.rep(j);
        let mut out = self.clone();
        if ri != rj {
            // Attach the larger root below the smaller one so roots stay
            // minimal.
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            out.parent[hi] = lo;
        }
        out
    }

    /// True when `i` and `j` are in the same class.
    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.rep(i) == self.rep(j)
    }

    /// Canonical encoding: element `i` maps to `rep(i)`.
    pub fn canonical(&self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.rep(i)).collect()
    }

    /// The classes, each sorted, ordered by representative.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for rep in 0..n {
            if self.rep(rep) == rep {
                out.push((0..n).filter(|&i| self.rep(i) == rep).collect());
            }
        }
        out
    }

    /// True when every class of `self` is contained in a class of `other`.
    pub fn coarsened_by(&self, other: &Partition) -> bool {
        assert_eq!(self.len(), other.len());
        (0..self.len()).all(|i| other.same_class(i, self.rep(i)))
    }
}

/// Every partition coarser than or equal to `p`, starting with `p` itself.
///
/// Generated breadth-first by joining one pair of distinct classes at a
/// time; within a round results are ordered by canonical encoding, so the
/// output order is deterministic. The count for a discrete partition of `n`
/// elements is the Bell number B(n).
pub fn coarsenings(p: &Partition) -> Vec<Partition> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![p.clone()];
    seen.insert(p.canonical());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for cur in frontier {
            let reps: Vec<usize> = (0..cur.len()).filter(|&i| cur.rep(i) == i).collect();
            for (a, &ri) in reps.iter().enumerate() {
                for &rj in &reps[a + 1..] {
                    let joined = cur.join(ri, rj);
                    if seen.insert(joined.canonical()) {
                        next.push(joined);
                    }
                }
            }
            out.push(cur);
        }
        next.sort_by_key(|q| q.canonical());
        frontier = next;
    }
    out
}
