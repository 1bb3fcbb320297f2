use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::abgroup::FinAbGroup;
use crate::error::{Error, Result};

/// Finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {:?})", self.order(), self.labels)
    }
}

impl FiniteGroup {
    /// Checks the group axioms on `table` (`table[a][b] = ab`).
    pub fn from_table(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 || labels.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Structural(
                "multiplication table must be a square table on 0..n".into(),
            ));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Structural("no identity element".into()))?;
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::Structural(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Structural(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            labels,
        })
    }

    /// `Z/n`, element `k` standing for `k` times the generator.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_table(table, labels).expect("cyclic group table")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, o: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), o.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                table[a][b] = self.mul(a / m, b / m) * m + o.mul(a % m, b % m);
            }
        }
        let labels = (0..n * m)
            .map(|a| format!("({},{})", self.labels[a / m], o.labels[a % m]))
            .collect();
        Self::from_table(table, labels).expect("product table")
    }

    /// Group generated by permutations of `0..d` (images lists). Composition
    /// `ab` means apply `b` first.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let d = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..d).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                if g.len() != d || g.iter().collect::<BTreeSet<_>>().len() != d || g.iter().any(|&x| x >= d) {
                    return Err(Error::Structural("generator is not a permutation".into()));
                }
                let h: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&h) {
                    index.insert(h.clone(), elems.len());
                    elems.push(h);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect())
            .collect();
        let labels = elems.iter().map(|p| format!("{p:?}")).collect();
        Self::from_table(table, labels)
    }

    /// Symmetric group on `d` letters.
    pub fn symmetric(d: usize) -> Self {
        if d <= 1 {
            return Self::trivial();
        }
        let mut swap: Vec<usize> = (0..d).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        Self::from_permutations(&[swap, cycle]).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut r = self.identity;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// A generator if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&a| self.element_order(a) == self.order())
    }

    /// Elements other than the identity, in index order.
    pub fn nonidentity(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| a != self.identity).collect()
    }

    /// Abelianization, presented on the elements with relations `[ab] = [a] + [b]`.
    pub fn abelianization(&self) -> FinAbGroup {
        let n = self.order();
        let mut rels = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut v = vec![BigInt::from(0); n];
                v[a] += 1;
                v[b] += 1;
                v[self.mul(a, b)] -= 1;
                rels.push(v);
            }
        }
        FinAbGroup::from_relations(n, &rels)
    }

    /// The subgroup on `elems`, checked for closure.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        let mut members: Vec<usize> = elems.to_vec();
        members.sort_unstable();
        members.dedup();
        if !members.contains(&self.identity) {
            return Err(Error::Structural("subgroup must contain the identity".into()));
        }
        // identity first
        members.retain(|&x| x != self.identity);
        members.insert(0, self.identity);
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut table = vec![vec![0; members.len()]; members.len()];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i][j] = *pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::Structural(format!("subgroup not closed: {a}·{b}")))?;
            }
        }
        let labels = members.iter().map(|&g| self.labels[g].clone()).collect();
        Ok(Subgroup {
            group: FiniteGroup::from_table(table, labels)?,
            embedding: members,
        })
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut elems = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if elems.insert(y) {
                    frontier.push(y);
                }
            }
        }
        self.subgroup(&elems.into_iter().collect::<Vec<_>>())
            .expect("generated subgroup is closed")
    }

    /// Left coset representatives of `h`, the identity first.
    pub fn left_transversal(&self, h: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in std::iter::once(self.identity).chain(0..self.order()) {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.embedding {
                seen[self.mul(g, x)] = true;
            }
        }
        reps
    }
}

/// Subgroup `H ≤ G`: an abstract group and its embedding into `G`
/// (`embedding[0]` is the identity).
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
}

impl Subgroup {
    /// Index in `H` of an element of `G`, if it lies in `H`.
    pub fn index_of(&self, g: usize) -> Option<usize> {
        self.embedding.iter().position(|&x| x == g)
    }
}
