//! Integer lattices in `Z^n`: echelon bases, membership with coordinates,
//! and kernels of maps into finitely generated abelian groups.

use super::matrix::Matrix;
use crate::scalar::{IntScalar, Overflow};

/// Sublattice of `Z^dim` with a basis in column echelon form: basis vector
/// `j` has its first nonzero entry (positive) at `pivots[j]`, pivots strictly
/// increasing. Optionally records each basis vector as an integer combination
/// of the generators it was built from.
#[derive(Clone, Debug)]
pub struct Lattice<T> {
    dim: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
    combos: Option<Vec<Vec<T>>>,
}

fn sub_mul<T: IntScalar>(dst: &mut [T], q: &T, src: &[T]) -> Result<(), Overflow> {
    if q.is_zero() {
        return Ok(());
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.sub_mul_c(q, s)?;
        }
    }
    Ok(())
}

impl<T: IntScalar> Lattice<T> {
    /// Lattice spanned by `gens` (each of length `dim`).
    pub fn span(dim: usize, gens: &[Vec<T>]) -> Result<Self, Overflow> {
        Self::build(dim, gens, false, &[])
    }

    /// Like [`Lattice::span`], keeping the combination of generators behind
    /// each basis vector so that [`Lattice::solve`] can be answered.
    pub fn span_tracked(dim: usize, gens: &[Vec<T>]) -> Result<Self, Overflow> {
        Self::build(dim, gens, true, &[])
    }

    /// Like [`Lattice::span`] when `reducers[i] = Some(g)` means
    /// `gens[g] = d e_i` with `d > 0`; coordinate `i` of the other generators
    /// is kept reduced modulo `d`, which bounds the entries.
    pub fn span_reducing(dim: usize, gens: &[Vec<T>], reducers: &[Option<usize>]) -> Result<Self, Overflow> {
        Self::build(dim, gens, false, reducers)
    }

    fn build(dim: usize, gens: &[Vec<T>], track: bool, reducers: &[Option<usize>]) -> Result<Self, Overflow> {
        let n = gens.len();
        let mut cols: Vec<Vec<T>> = gens
            .iter()
            .filter(|g| {
                assert_eq!(g.len(), dim, "generator length");
                true
            })
            .cloned()
            .collect();
        let mut combo: Vec<Vec<T>> = if track {
            (0..n)
                .map(|i| {
                    let mut e = vec![T::zero(); n];
                    e[i] = T::one();
                    e
                })
                .collect()
        } else {
            Vec::new()
        };
        let reducer = |i: usize| reducers.get(i).copied().flatten();
        let mut held = vec![false; n];
        for i in 0..dim {
            if let Some(g) = reducer(i) {
                held[g] = true;
            }
        }
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        let mut combos = Vec::new();
        let mut active: Vec<usize> = (0..n)
            .filter(|&c| !held[c] && cols[c].iter().any(|x| !x.is_zero()))
            .collect();
        for r in 0..dim {
            if let Some(g) = reducer(r) {
                active.push(g);
            }
            if active.is_empty() {
                if reducers.is_empty() {
                    break;
                }
                continue;
            }
            loop {
                let nz: Vec<usize> = active.iter().copied().filter(|&c| !cols[c][r].is_zero()).collect();
                if nz.len() <= 1 {
                    if let Some(&p) = nz.first() {
                        if cols[p][r].is_negative() {
                            for x in cols[p].iter_mut() {
                                *x = -x.clone();
                            }
                            if track {
                                for x in combo[p].iter_mut() {
                                    *x = -x.clone();
                                }
                            }
                        }
                    }
                    if !reducers.is_empty() {
                        for &c in &active {
                            for i in r + 1..dim {
                                let Some(g) = reducer(i) else { continue };
                                if cols[c][i].is_zero() {
                                    continue;
                                }
                                let d = cols[g][i].clone();
                                let q = cols[c][i].div_floor(&d);
                                if !q.is_zero() {
                                    cols[c][i] = cols[c][i].sub_mul_c(&q, &d)?;
                                    if track {
                                        combo[c][g] = combo[c][g].sub_mul_c(&q, &T::one())?;
                                    }
                                }
                            }
                        }
                    }
                    if let Some(&p) = nz.first() {
                        basis.push(cols[p].clone());
                        pivots.push(r);
                        if track {
                            combos.push(combo[p].clone());
                        }
                        active.retain(|&c| c != p);
                    }
                    break;
                }
                let p = *nz.iter().min_by_key(|&&c| cols[c][r].abs().to_big()).unwrap();
                let pv = cols[p][r].clone();
                let src = cols[p].clone();
                let csrc = if track { combo[p].clone() } else { Vec::new() };
                for &c in &nz {
                    if c == p {
                        continue;
                    }
                    let q = cols[c][r].div_floor(&pv);
                    sub_mul(&mut cols[c], &q, &src)?;
                    if track {
                        sub_mul(&mut combo[c], &q, &csrc)?;
                    }
                }
            }
            active.retain(|&c| cols[c].iter().any(|x| !x.is_zero()));
        }
        Ok(Lattice {
            dim,
            basis,
            pivots,
            combos: if track { Some(combos) } else { None },
        })
    }

    /// The same lattice over `BigInt`.
    pub fn to_big(&self) -> Lattice<num_bigint::BigInt> {
        let conv = |v: &Vec<T>| v.iter().map(|x| x.to_big()).collect::<Vec<_>>();
        Lattice {
            dim: self.dim,
            basis: self.basis.iter().map(conv).collect(),
            pivots: self.pivots.clone(),
            combos: self.combos.as_ref().map(|c| c.iter().map(conv).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Coordinates of `w` in the echelon basis, or `None` if `w` is not in
    /// the lattice.
    pub fn coordinates(&self, w: &[T]) -> Result<Option<Vec<T>>, Overflow> {
        assert_eq!(w.len(), self.dim);
        let mut w = w.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        let mut next_pivot = 0;
        for (j, b) in self.basis.iter().enumerate() {
            let r = self.pivots[j];
            if w[next_pivot..r].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, rem) = w[r].div_rem(&b[r]);
            if !rem.is_zero() {
                return Ok(None);
            }
            sub_mul(&mut w, &q, b)?;
            out.push(q);
            next_pivot = r + 1;
        }
        if w.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(out))
    }

    pub fn contains(&self, w: &[T]) -> Result<bool, Overflow> {
        Ok(self.coordinates(w)?.is_some())
    }

    /// An integer combination of the original generators equal to `w`.
    /// Requires a tracked lattice.
    pub fn solve(&self, w: &[T]) -> Result<Option<Vec<T>>, Overflow> {
        let combos = self.combos.as_ref().expect("solve needs span_tracked");
        let Some(c) = self.coordinates(w)? else {
            return Ok(None);
        };
        let n = combos.first().map_or(0, |v| v.len());
        let mut out = vec![T::zero(); n];
        for (q, comb) in c.iter().zip(combos) {
            sub_mul(&mut out, &-q.clone(), comb)?;
        }
        Ok(Some(out))
    }
}

/// Basis (as columns) of `{ x in Z^a : m x = 0 in  (+)_j Z/moduli[j] }`,
/// `m` of shape `b x a`; a modulus of 0 stands for `Z`.
pub fn kernel_mod<T: IntScalar>(m: &Matrix<T>, moduli: &[T]) -> Result<Vec<Vec<T>>, Overflow> {
    assert_eq!(m.rows(), moduli.len());
    let a = m.cols();
    let mut basis: Vec<Vec<T>> = (0..a)
        .map(|i| {
            let mut e = vec![T::zero(); a];
            e[i] = T::one();
            e
        })
        .collect();
    for j in 0..m.rows() {
        let row = m.row(j);
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        let d = &moduli[j];
        let reduce = |x: T| if d.is_zero() { x } else { x.mod_floor(d) };
        let mut vals: Vec<T> = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut s = T::zero();
            for (x, y) in row.iter().zip(b) {
                if !x.is_zero() && !y.is_zero() {
                    s = s.add_mul_c(x, y)?;
                }
            }
            vals.push(reduce(s));
        }
        loop {
            let nz: Vec<usize> = (0..basis.len()).filter(|&c| !vals[c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    if d.is_zero() {
                        basis.swap_remove(p);
                    } else {
                        let g = vals[p].gcd(d);
                        let f = d.clone() / g;
                        for x in basis[p].iter_mut() {
                            *x = x.mul_c(&f)?;
                        }
                    }
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| vals[c].abs().to_big()).unwrap();
            let pv = vals[p].clone();
            let src = basis[p].clone();
            for &c in &nz {
                if c == p {
                    continue;
                }
                let q = vals[c].div_floor(&pv);
                sub_mul(&mut basis[c], &q, &src)?;
                vals[c] = reduce(vals[c].sub_mul_c(&q, &pv)?);
            }
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_membership() {
        let l = Lattice::<i64>::span_tracked(2, &[vec![6, 0], vec![10, 0], vec![1, 1]]).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[2, 0]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
        let c = l.solve(&[3, 1]).unwrap().unwrap();
        let v0 = 6 * c[0] + 10 * c[1] + c[2];
        assert_eq!((v0, c[2]), (3, 1));
    }

    #[test]
    fn kernel_with_torsion() {
        // x -> 2x in Z/4: kernel is 2Z
        let m = Matrix::from_i64_rows(&[&[2]]);
        let k = kernel_mod::<i64>(&m, &[4]).unwrap();
        assert_eq!(k, vec![vec![2]]);
        // (x, y) -> x + y in Z: kernel spanned by (1,-1)
        let m = Matrix::from_i64_rows(&[&[1, 1]]);
        let k = kernel_mod::<i64>(&m, &[0]).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + k[0][1], 0);
    }

    proptest::proptest! {
        #[test]
        fn reducing_span_is_the_same_lattice(
            gens in proptest::collection::vec(proptest::collection::vec(-50i64..50, 3), 1..6),
            d in proptest::collection::vec(1i64..9, 3),
        ) {
            let mut all = gens.clone();
            let mut reducers = vec![None; 3];
            for (i, &di) in d.iter().enumerate() {
                let mut v = vec![0; 3];
                v[i] = di;
                reducers[i] = Some(all.len());
                all.push(v);
            }
            let plain = Lattice::<i64>::span(3, &all).unwrap();
            let reduced = Lattice::<i64>::span_reducing(3, &all, &reducers).unwrap();
            proptest::prop_assert_eq!(plain.rank(), reduced.rank());
            for b in reduced.basis() {
                proptest::prop_assert!(plain.contains(b).unwrap());
            }
            for b in plain.basis() {
                proptest::prop_assert!(reduced.contains(b).unwrap());
            }
            for (j, b) in reduced.basis().iter().enumerate() {
                for (i, x) in b.iter().enumerate() {
                    proptest::prop_assert!(i <= reduced.pivots[j] || (0..d[i]).contains(x));
                }
            }
        }
    }
}
