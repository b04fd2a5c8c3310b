use crate::error::{Error, Result};

use super::bitmap::{BitBuilder, RankBitmap};

/// Pointer-based ordinal tree; node 0 is the root.
#[derive(Clone, Debug, Default)]
pub struct OrdinalTree {
    pub children: Vec<Vec<usize>>,
}

impl OrdinalTree {
    /// Node indices in level order.
    pub fn level_order(&self) -> Vec<usize> {
        let mut order = vec![0];
        let mut head = 0;
        while head < order.len() {
            order.extend(&self.children[order[head]]);
            head += 1;
        }
        order
    }
}

/// Level-order unary degree sequence. Bits start with the super-root `10`,
/// then every node in level order writes `1^degree 0`, for `2t+1` bits.
/// A node is identified by the bit position where its description starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoudsTree {
    bits: RankBitmap,
    /// Marks description starts of internal nodes.
    internal: RankBitmap,
}

impl LoudsTree {
    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut b = BitBuilder::new();
        b.push(true);
        b.push(false);
        for d in degrees {
            for _ in 0..d {
                b.push(true);
            }
            b.push(false);
        }
        Self::from_bitmap(b.build())
    }

    pub fn encode(tree: &OrdinalTree) -> Self {
        Self::from_degrees(tree.level_order().into_iter().map(|v| tree.children[v].len()))
    }

    pub fn from_bitmap(bits: RankBitmap) -> Self {
        let mut internal = BitBuilder::with_len(bits.len());
        for p in 1..bits.len() {
            if bits.get(p) && !bits.get(p - 1) {
                internal.set(p);
            }
        }
        Self { bits, internal: internal.build() }
    }

    /// Like [`LoudsTree::from_bitmap`], but rejects bit strings that do not
    /// describe a level-order tree.
    pub fn try_from_bitmap(bits: RankBitmap) -> Result<Self> {
        let bad = |why: &str| Err(Error::Format(format!("LOUDS bitmap: {why}")));
        if bits.len() < 3 || !bits.get(0) || bits.get(1) || bits.get(bits.len() - 1) {
            return bad("bad frame");
        }
        // nodes announced so far vs. nodes whose description has begun
        let (mut announced, mut described) = (1usize, 1usize);
        for p in 2..bits.len() {
            if described > announced {
                return bad("description of an unannounced node");
            }
            if bits.get(p) {
                announced += 1;
            } else {
                described += 1;
            }
        }
        if described - 1 != announced {
            return bad("node count mismatch");
        }
        Ok(Self::from_bitmap(bits))
    }

    pub fn bits(&self) -> &RankBitmap {
        &self.bits
    }

    pub fn node_count(&self) -> usize {
        self.bits.count_zeros() - 1
    }

    pub fn internal_count(&self) -> usize {
        self.internal.count_ones()
    }

    pub fn leaf_count(&self) -> usize {
        self.node_count() - self.internal_count()
    }

    pub fn root(&self) -> usize {
        2
    }

    pub fn is_node(&self, v: usize) -> bool {
        v >= 2 && v < self.bits.len() && !self.bits.get(v - 1)
    }

    pub fn check(&self, v: usize) -> Result<usize> {
        if self.is_node(v) {
            Ok(v)
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        !self.bits.get(v)
    }

    /// 1-based level-order number of `v`.
    pub fn nodemap(&self, v: usize) -> usize {
        self.bits.rank0(v)
    }

    /// Node with level-order number `k` (1-based).
    pub fn node(&self, k: usize) -> usize {
        self.bits.select0(k).expect("level-order number in range") + 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.bits.select0(self.nodemap(v) + 1).expect("description is terminated") - v
    }

    /// `i`-th child of `v`, 1-based.
    pub fn child(&self, v: usize, i: usize) -> Result<usize> {
        if i == 0 || i > self.degree(v) {
            return Err(Error::OutOfRange { what: "child", index: i, limit: self.degree(v) });
        }
        Ok(self.node(self.bits.rank1(v + i)))
    }

    /// Level-order number of the first child, valid when `v` is internal.
    pub fn first_child_number(&self, v: usize) -> usize {
        self.bits.rank1(v + 1)
    }

    pub fn parent(&self, v: usize) -> Result<usize> {
        let k = self.nodemap(v);
        if k <= 1 {
            return Err(Error::NoParent);
        }
        let pos = self.bits.select1(k).expect("every node has an incoming one");
        Ok(self.node(self.bits.rank0(pos)))
    }

    /// Preceding sibling.
    pub fn psibling(&self, v: usize) -> Result<usize> {
        let k = self.nodemap(v);
        let pos = self.bits.select1(k).expect("every node has an incoming one");
        if k > 1 && self.bits.get(pos - 1) {
            Ok(self.node(k - 1))
        } else {
            Err(Error::NoSibling)
        }
    }

    /// Leaves in level order up to and including `v`.
    pub fn leafrank(&self, v: usize) -> usize {
        self.nodemap(v) - self.internalrank(v)
    }

    /// Internal nodes in level order up to and including `v`.
    pub fn internalrank(&self, v: usize) -> usize {
        self.internal.rank1(v + 1)
    }

    /// The `r`-th internal node in level order (1-based).
    pub fn internalselect(&self, r: usize) -> Result<usize> {
        self.internal
            .select1(r)
            .ok_or(Error::OutOfRange { what: "internal node", index: r, limit: self.internal_count() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_tree(nodes: usize, seed: u64) -> OrdinalTree {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut children = vec![Vec::new(); nodes];
        for v in 1..nodes {
            // bias towards recent nodes to get some depth
            let lo = v.saturating_sub(1 + rng.gen_range(0..20));
            let p = rng.gen_range(lo..v);
            children[p].push(v);
        }
        OrdinalTree { children }
    }

    #[test]
    fn root_with_two_leaves() {
        let tree = OrdinalTree { children: vec![vec![1, 2], vec![], vec![]] };
        let louds = LoudsTree::encode(&tree);
        let bits: String = (0..louds.bits().len()).map(|i| if louds.bits().get(i) { '1' } else { '0' }).collect();
        assert_eq!(bits, "1011000");
        assert_eq!(louds.node_count(), 3);
        let root = louds.root();
        assert_eq!(louds.parent(root).unwrap_err().to_string(), Error::NoParent.to_string());
        let c1 = louds.child(root, 1).unwrap();
        assert!(matches!(louds.psibling(c1), Err(Error::NoSibling)));
        assert!(louds.child(root, 3).is_err());
        assert!(louds.check(3).is_err());
    }

    #[test]
    fn agrees_with_reference_tree() {
        for (nodes, seed) in [(1usize, 1u64), (2, 2), (17, 3), (500, 4), (10_000, 5)] {
            let tree = random_tree(nodes, seed);
            let louds = LoudsTree::encode(&tree);
            assert_eq!(louds.bits().len(), 2 * nodes + 1);
            assert_eq!(louds.node_count(), nodes);

            let order = tree.level_order();
            let mut number = vec![0; nodes];
            for (k, &v) in order.iter().enumerate() {
                number[v] = k + 1;
            }
            let mut parent = vec![usize::MAX; nodes];
            for (p, cs) in tree.children.iter().enumerate() {
                for &c in cs {
                    parent[c] = p;
                }
            }
            let id = |v: usize| louds.node(number[v]);
            let (mut leaves, mut internals) = (0, 0);
            for &v in &order {
                let u = id(v);
                assert!(louds.is_node(u));
                assert_eq!(louds.nodemap(u), number[v]);
                assert_eq!(louds.degree(u), tree.children[v].len());
                for (i, &c) in tree.children[v].iter().enumerate() {
                    let cu = louds.child(u, i + 1).unwrap();
                    assert_eq!(cu, id(c));
                    assert_eq!(louds.parent(cu).unwrap(), u);
                    if i > 0 {
                        assert_eq!(louds.psibling(cu).unwrap(), id(tree.children[v][i - 1]));
                    } else {
                        assert!(louds.psibling(cu).is_err());
                    }
                }
                if v == 0 {
                    assert!(louds.parent(u).is_err());
                } else {
                    assert_eq!(louds.parent(u).unwrap(), id(parent[v]));
                }
                if tree.children[v].is_empty() {
                    leaves += 1;
                    assert!(louds.is_leaf(u));
                    assert_eq!(louds.leafrank(u), leaves);
                } else {
                    internals += 1;
                    assert!(!louds.is_leaf(u));
                    assert_eq!(louds.internalrank(u), internals);
                    assert_eq!(louds.internalselect(internals).unwrap(), u);
                }
            }
            assert_eq!(louds.leaf_count(), leaves);
            assert_eq!(louds.internal_count(), internals);
        }
    }
}
