//! Disjoint-set forest and canonical class labelling.

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind { parent: (0..len as u32).collect(), rank: vec![0; len] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Returns `true` if the two elements were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
        true
    }

    /// Class labels numbered by first appearance, so class `i` is the one whose
    /// minimum member is the `i`-th smallest minimum.
    pub fn labels(&mut self) -> Labels {
        let len = self.parent.len();
        let mut root_label = vec![u32::MAX; len];
        let mut labels = vec![0u32; len];
        let mut next = 0u32;
        for x in 0..len {
            let r = self.find(x);
            if root_label[r] == u32::MAX {
                root_label[r] = next;
                next += 1;
            }
            labels[x] = root_label[r];
        }
        Labels { labels, classes: next as usize }
    }
}

/// A partition of `0..len` given by canonical labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub labels: Vec<u32>,
    pub classes: usize,
}

impl Labels {
    /// Relabel an arbitrary labelling canonically (by first appearance).
    pub fn canonical(raw: &[u32]) -> Labels {
        let mut map = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &r in raw {
            let next = map.len() as u32;
            labels.push(*map.entry(r).or_insert(next));
        }
        Labels { classes: map.len(), labels }
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.classes];
        for (x, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(x);
        }
        blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_counts() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(0, 3));
        assert!(uf.union(3, 5));
        assert!(!uf.union(0, 5));
        let l = uf.labels();
        assert_eq!(l.classes, 4);
        assert_eq!(l.labels, vec![0, 1, 2, 0, 3, 0]);
        assert_eq!(l.blocks(), vec![vec![0, 3, 5], vec![1], vec![2], vec![4]]);
    }

    #[test]
    fn canonical_relabel() {
        let l = Labels::canonical(&[7, 7, 2, 9, 2]);
        assert_eq!(l.labels, vec![0, 0, 1, 2, 1]);
        assert_eq!(l.classes, 3);
    }
}
