//! Disjoint-set forest with union by size and path halving.

#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(count: usize) -> Self {
        let mut uf = UnionFind::default();
        uf.reset(count);
        uf
    }

    /// Make every element a singleton again, reusing storage.
    pub fn reset(&mut self, count: usize) {
        self.parent.clear();
        self.parent.extend(0..count as u32);
        self.size.clear();
        self.size.resize(count, 1);
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn find(&mut self, mut i: usize) -> usize {
        loop {
            let p = self.parent[i] as usize;
            if p == i {
                return i;
            }
            let gp = self.parent[p];
            self.parent[i] = gp;
            i = gp as usize;
        }
    }

    /// Merge the sets of `a` and `b`; returns the surviving root.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        ra
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Size of the set whose root is `root`.
    pub fn root_size(&self, root: usize) -> usize {
        self.size[root] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_counts() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 3);
        assert!(uf.same(0, 2));
        assert!(!uf.same(0, 4));
        let r = uf.find(3);
        assert_eq!(uf.root_size(r), 4);
        uf.reset(6);
        assert!(!uf.same(0, 1));
    }
}
