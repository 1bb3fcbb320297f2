use num_bigint::BigInt;
use num_traits::Zero;

use super::module::{reduce, GModule};
use crate::abgroup::{FinAbGroup, Lattice, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{with_fallback, IntScalar, Overflow};
use crate::IntMatrix;

/// Default degree window `|i| ≤ 4`.
pub const DEFAULT_WINDOW: i64 = 4;

/// Sparse integer matrix stored by rows.
#[derive(Clone, Debug)]
pub(crate) struct Sparse<T> {
    pub rows: Vec<Vec<(usize, T)>>,
    pub cols: usize,
}

impl<T: IntScalar> Sparse<T> {
    fn from_dense(m: &IntMatrix) -> std::result::Result<Self, Overflow> {
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let mut r = Vec::new();
            for (j, x) in m.row(i).iter().enumerate() {
                if !x.is_zero() {
                    r.push((j, T::from_big(x)?));
                }
            }
            rows.push(r);
        }
        Ok(Sparse { rows, cols: m.cols() })
    }

    fn columns(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.rows.len()]; self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                out[*j][i] = x.clone();
            }
        }
        out
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = Matrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                m[(i, *j)] = x.to_big();
            }
        }
        m
    }
}

/// Accumulates entries, merging duplicates.
struct Builder<T> {
    rows: Vec<Vec<(usize, T)>>,
    cols: usize,
}

impl<T: IntScalar> Builder<T> {
    fn new(rows: usize, cols: usize) -> Self {
        Builder {
            rows: vec![Vec::new(); rows],
            cols,
        }
    }

    fn push(&mut self, r: usize, c: usize, x: T) {
        if !x.is_zero() {
            self.rows[r].push((c, x));
        }
    }

    fn finish(mut self) -> std::result::Result<Sparse<T>, Overflow> {
        for row in self.rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for (c, x) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lx)) if *lc == c => *lx = lx.add_c(&x)?,
                    _ => merged.push((c, x)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        Ok(Sparse {
            rows: self.rows,
            cols: self.cols,
        })
    }
}

/// Normalized complete complex of a `G`-module: `D^j = M^{(G∖1)^j}` for
/// `j ≥ 0` (inhomogeneous cochains), `D^j = M^{(G∖1)^{-j-1}}` for `j < 0`
/// (bar chains), `d^{-1}` the norm.
pub(crate) struct Complex<'a> {
    m: &'a GModule,
    nontriv: Vec<usize>,
    pos: Vec<usize>,
}

impl<'a> Complex<'a> {
    pub fn new(m: &'a GModule) -> Self {
        let g = m.group();
        let nontriv = g.nonidentity();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &x) in nontriv.iter().enumerate() {
            pos[x] = i;
        }
        Complex { m, nontriv, pos }
    }

    fn tuple_len(j: i64) -> usize {
        if j >= 0 {
            j as usize
        } else {
            (-j - 1) as usize
        }
    }

    pub fn blocks(&self, j: i64) -> usize {
        self.nontriv.len().pow(Self::tuple_len(j) as u32)
    }

    pub fn dim(&self, j: i64) -> usize {
        self.blocks(j) * self.m.rank()
    }

    pub fn moduli(&self, j: i64) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.dim(j));
        for _ in 0..self.blocks(j) {
            out.extend(self.m.moduli().iter().cloned());
        }
        out
    }

    fn tuple(&self, mut idx: usize, len: usize) -> Vec<usize> {
        let b = self.nontriv.len();
        let mut t = vec![0; len];
        for k in (0..len).rev() {
            t[k] = self.nontriv[idx % b];
            idx /= b;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        let b = self.nontriv.len();
        t.iter().fold(0, |acc, &x| acc * b + self.pos[x])
    }

    fn add_matrix<T: IntScalar>(
        &self,
        out: &mut Builder<T>,
        rb: usize,
        cb: usize,
        a: &IntMatrix,
        sign: i64,
    ) -> std::result::Result<(), Overflow> {
        let c = self.m.rank();
        for r in 0..c {
            for s in 0..c {
                let x = &a[(r, s)];
                if !x.is_zero() {
                    out.push(rb * c + r, cb * c + s, T::from_big(&(x * sign))?);
                }
            }
        }
        Ok(())
    }

    fn add_identity<T: IntScalar>(&self, out: &mut Builder<T>, rb: usize, cb: usize, sign: i64) {
        let c = self.m.rank();
        for r in 0..c {
            out.push(rb * c + r, cb * c + r, <T as IntScalar>::from_i64(sign));
        }
    }

    /// `d^j : D^j -> D^{j+1}`.
    pub fn differential<T: IntScalar>(&self, j: i64) -> std::result::Result<Sparse<T>, Overflow> {
        let g = self.m.group();
        let id = g.identity();
        let mut b = Builder::new(self.dim(j + 1), self.dim(j));
        let sgn = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
        if j >= 0 {
            let len = j as usize;
            for ob in 0..self.blocks(j + 1) {
                let t = self.tuple(ob, len + 1);
                self.add_matrix(&mut b, ob, self.index(&t[1..]), self.m.action(t[0]), 1)?;
                for k in 0..len {
                    let p = g.mul(t[k], t[k + 1]);
                    if p != id {
                        let mut s = t[..k].to_vec();
                        s.push(p);
                        s.extend_from_slice(&t[k + 2..]);
                        self.add_identity(&mut b, ob, self.index(&s), sgn(k + 1));
                    }
                }
                self.add_identity(&mut b, ob, self.index(&t[..len]), sgn(len + 1));
            }
        } else if j == -1 {
            self.add_matrix(&mut b, 0, 0, &self.m.norm_matrix(), 1)?;
        } else {
            let len = Self::tuple_len(j);
            for ib in 0..self.blocks(j) {
                let t = self.tuple(ib, len);
                self.add_matrix(&mut b, self.index(&t[1..]), ib, self.m.action(g.inv(t[0])), 1)?;
                for k in 0..len - 1 {
                    let p = g.mul(t[k], t[k + 1]);
                    if p != id {
                        let mut s = t[..k].to_vec();
                        s.push(p);
                        s.extend_from_slice(&t[k + 2..]);
                        self.add_identity(&mut b, self.index(&s), ib, sgn(k + 1));
                    }
                }
                self.add_identity(&mut b, self.index(&t[..len - 1]), ib, sgn(len));
            }
        }
        b.finish()
    }
}

/// Generators of `{x in Z^a : m x = 0 in ⊕ Z/moduli}` for a sparse `m`
/// that is well defined on `⊕ Z/src_moduli`. Entries stay reduced modulo
/// `src_moduli`; the vectors `d e_i` for nonzero `src_moduli[i] = d` come last.
pub(crate) fn sparse_kernel<T: IntScalar>(
    m: &Sparse<T>,
    moduli: &[T],
    src_moduli: &[T],
) -> std::result::Result<Vec<Vec<T>>, Overflow> {
    let a = m.cols;
    let mut basis: Vec<Vec<T>> = (0..a)
        .map(|i| {
            let mut e = vec![T::zero(); a];
            e[i] = T::one();
            e
        })
        .collect();
    for (row, d) in m.rows.iter().zip(moduli) {
        if row.is_empty() {
            continue;
        }
        let reduce = |x: T| if d.is_zero() { x } else { x.mod_floor(d) };
        let mut vals: Vec<T> = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut s = T::zero();
            for (c, x) in row {
                if !b[*c].is_zero() {
                    s = s.add_mul_c(x, &b[*c])?;
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
                        let f = d.clone() / vals[p].gcd(d);
                        for x in basis[p].iter_mut() {
                            if !x.is_zero() {
                                *x = x.mul_c(&f)?;
                            }
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
                for (x, s) in basis[c].iter_mut().zip(&src) {
                    if !s.is_zero() {
                        *x = x.sub_mul_c(&q, s)?;
                    }
                }
                vals[c] = reduce(vals[c].sub_mul_c(&q, &pv)?);
            }
        }
        for b in basis.iter_mut() {
            for (x, d) in b.iter_mut().zip(src_moduli) {
                if !d.is_zero() && !x.is_zero() {
                    *x = x.mod_floor(d);
                }
            }
        }
        basis.retain(|b| b.iter().any(|x| !x.is_zero()));
    }
    for (i, d) in src_moduli.iter().enumerate() {
        if !d.is_zero() {
            let mut v = vec![T::zero(); a];
            v[i] = d.clone();
            basis.push(v);
        }
    }
    Ok(basis)
}

/// `Ker(out) / (Im(inn) + moduli lattice)` with the data needed to classify
/// elements of the kernel.
pub(crate) struct Subquotient {
    pub group: FinAbGroup,
    pub kernel: Vec<Vec<BigInt>>,
    pub lattice: Lattice<BigInt>,
}

fn subquotient_t<T: IntScalar>(
    out: &Sparse<T>,
    out_moduli: &[BigInt],
    inn: &Sparse<T>,
    moduli: &[BigInt],
) -> std::result::Result<std::result::Result<Subquotient, String>, Overflow> {
    let a = out.cols;
    let om: Vec<T> = out_moduli
        .iter()
        .map(T::from_big)
        .collect::<std::result::Result<_, _>>()?;
    let sm: Vec<T> = moduli.iter().map(T::from_big).collect::<std::result::Result<_, _>>()?;
    let gens = sparse_kernel(out, &om, &sm)?;
    let mut reducers = vec![None; a];
    let mut next = gens.len() - moduli.iter().filter(|d| !d.is_zero()).count();
    for (i, d) in moduli.iter().enumerate() {
        if !d.is_zero() {
            reducers[i] = Some(next);
            next += 1;
        }
    }
    let kernel = Lattice::span_reducing(a, &gens, &reducers)?.basis().to_vec();
    let k = kernel.len();
    let lat = Lattice::span_tracked(a, &kernel)?;
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    let mut targets: Vec<Vec<T>> = inn.columns();
    for (i, d) in moduli.iter().enumerate() {
        if !d.is_zero() {
            let mut v = vec![T::zero(); a];
            v[i] = T::from_big(d)?;
            targets.push(v);
        }
    }
    for (t, v) in targets.iter().enumerate() {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        match lat.solve(v)? {
            Some(c) => rels.push(c.iter().map(|x| x.to_big()).collect()),
            None => return Ok(Err(format!("boundary or relation vector {t} is not a cycle"))),
        }
    }
    Ok(Ok(Subquotient {
        group: FinAbGroup::from_relations(k, &rels),
        kernel: kernel.iter().map(|v| v.iter().map(|x| x.to_big()).collect()).collect(),
        lattice: lat.to_big(),
    }))
}

/// Subquotient for dense BigInt maps `inn : Z^b -> Z^a`, `out : Z^a -> Z^c`.
pub(crate) fn subquotient(
    out: &IntMatrix,
    out_moduli: &[BigInt],
    inn: &IntMatrix,
    moduli: &[BigInt],
) -> Result<Subquotient> {
    let r = with_fallback(
        || subquotient_t::<i64>(&Sparse::from_dense(out)?, out_moduli, &Sparse::from_dense(inn)?, moduli),
        || {
            subquotient_t::<BigInt>(
                &Sparse::from_dense(out).expect("bigint"),
                out_moduli,
                &Sparse::from_dense(inn).expect("bigint"),
                moduli,
            )
            .expect("bigint")
        },
    );
    r.map_err(Error::Structural)
}

impl Subquotient {
    /// Canonical class of a kernel element.
    pub fn classify(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .lattice
            .solve(z)
            .expect("bigint")
            .ok_or_else(|| Error::Structural("element is not in the kernel".into()))?;
        Ok(self.group.classify(&c))
    }

    /// A kernel element representing a canonical class.
    pub fn representative(&self, c: &[BigInt]) -> Vec<BigInt> {
        let coeffs = self.group.lift(c);
        let a = self.lattice.dim();
        let mut z = vec![BigInt::zero(); a];
        for (q, v) in coeffs.iter().zip(&self.kernel) {
            if q.is_zero() {
                continue;
            }
            for (x, y) in z.iter_mut().zip(v) {
                *x += q * y;
            }
        }
        z
    }
}

/// `Ĥ^j(G, M)` with cocycle bookkeeping: the group is presented on a basis
/// of `Ker d^j`, so cocycles can be classified and classes lifted.
pub struct TateGroup {
    pub degree: i64,
    pub group: FinAbGroup,
    moduli: Vec<BigInt>,
    sq: Subquotient,
}

impl TateGroup {
    /// Dimension of the cochain lattice `D^j`.
    pub fn cochain_dim(&self) -> usize {
        self.moduli.len()
    }

    /// Canonical class of a cocycle.
    pub fn classify(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut z = z.to_vec();
        reduce(&self.moduli, &mut z);
        self.sq.classify(&z)
    }

    /// A cocycle representing a canonical class.
    pub fn representative(&self, c: &[BigInt]) -> Vec<BigInt> {
        let mut z = self.sq.representative(c);
        reduce(&self.moduli, &mut z);
        z
    }
}

fn check_dd<T: IntScalar>(
    first: &Sparse<T>,
    second: &Sparse<T>,
    moduli: &[BigInt],
    j: i64,
) -> std::result::Result<std::result::Result<(), String>, Overflow> {
    for (r, row) in second.rows.iter().enumerate() {
        let mut acc: std::collections::BTreeMap<usize, T> = Default::default();
        for (k, x) in row {
            for (c, y) in &first.rows[*k] {
                let e = acc.entry(*c).or_insert_with(T::zero);
                *e = e.add_mul_c(x, y)?;
            }
        }
        let d = T::from_big(&moduli[r])?;
        for (c, v) in acc {
            let bad = if d.is_zero() {
                !v.is_zero()
            } else {
                !v.mod_floor(&d).is_zero()
            };
            if bad {
                return Ok(Err(format!("d^{} ∘ d^{} != 0 at entry ({r}, {c})", j, j - 1)));
            }
        }
    }
    Ok(Ok(()))
}

fn tate_group_t<T: IntScalar>(
    m: &GModule,
    j: i64,
) -> std::result::Result<std::result::Result<TateGroup, String>, Overflow> {
    let cx = Complex::new(m);
    let inn = cx.differential::<T>(j - 1)?;
    let out = cx.differential::<T>(j)?;
    if let Err(e) = check_dd(&inn, &out, &cx.moduli(j + 1), j)? {
        return Ok(Err(e));
    }
    let moduli = cx.moduli(j);
    Ok(
        subquotient_t(&out, &cx.moduli(j + 1), &inn, &moduli)?.map(|sq| TateGroup {
            degree: j,
            group: sq.group.clone(),
            moduli,
            sq,
        }),
    )
}

/// `Ĥ^j(G, M)` from the normalized complete complex (any finite `G`).
pub fn tate_group(m: &GModule, j: i64) -> Result<TateGroup> {
    with_fallback(
        || tate_group_t::<i64>(m, j),
        || tate_group_t::<BigInt>(m, j).expect("bigint"),
    )
    .map_err(Error::Structural)
}

/// Dense `d^j` of the complete complex, for inspection.
pub fn complete_differential(m: &GModule, j: i64) -> IntMatrix {
    Complex::new(m).differential::<BigInt>(j).expect("bigint").to_dense()
}

/// `d^j ∘ d^{j-1} = 0` modulo the relations of `D^{j+1}`.
pub fn check_complex(m: &GModule, j: i64) -> Result<()> {
    let cx = Complex::new(m);
    let a = cx.differential::<BigInt>(j - 1).expect("bigint");
    let b = cx.differential::<BigInt>(j).expect("bigint");
    check_dd(&a, &b, &cx.moduli(j + 1), j)
        .expect("bigint")
        .map_err(Error::Structural)
}

/// Coordinates of the complete complex in degree `j`.
pub fn cochain_blocks(m: &GModule, j: i64) -> usize {
    Complex::new(m).blocks(j)
}

/// `Ĥ^j` through the general complex.
pub fn tate_cohomology_general(m: &GModule, j: i64) -> Result<FinAbGroup> {
    Ok(tate_group(m, j)?.group)
}

/// `Ĥ^j` for cyclic `G = <s>`: `Ker(s-1)/N M` in even degrees and
/// `Ker N/(s-1)M` in odd degrees.
pub fn tate_cohomology_cyclic(m: &GModule, j: i64) -> Result<FinAbGroup> {
    let g = m.group();
    let s = g
        .cyclic_generator()
        .ok_or_else(|| Error::Unsupported("cyclic fast path needs a cyclic group".into()))?;
    let c = m.rank();
    let mut t = m.action(s).clone();
    for i in 0..c {
        t[(i, i)] -= 1;
    }
    let n = m.norm_matrix();
    let (out, inn) = if j.rem_euclid(2) == 0 { (&t, &n) } else { (&n, &t) };
    Ok(subquotient(out, m.moduli(), inn, m.moduli())?.group)
}

/// `Ĥ^j(G, M)` for `|j|` within `window`; cyclic groups take the fast path.
pub fn tate_cohomology_in_window(m: &GModule, j: i64, window: i64) -> Result<FinAbGroup> {
    if j.abs() > window {
        return Err(Error::Unsupported(format!(
            "degree {j} outside the window |i| <= {window}"
        )));
    }
    if m.group().cyclic_generator().is_some() {
        tate_cohomology_cyclic(m, j)
    } else {
        tate_cohomology_general(m, j)
    }
}

/// `Ĥ^j(G, M)` in the default window.
pub fn tate_cohomology(m: &GModule, j: i64) -> Result<FinAbGroup> {
    tate_cohomology_in_window(m, j, DEFAULT_WINDOW)
}

/// Applies a module map blockwise to a cochain.
pub fn map_cochain(f: &IntMatrix, z: &[BigInt]) -> Vec<BigInt> {
    let (r, c) = (f.rows(), f.cols());
    if c == 0 {
        return Vec::new();
    }
    let blocks = z.len() / c;
    let mut out = Vec::with_capacity(blocks * r);
    for b in 0..blocks {
        out.extend(f.try_mul_vec(&z[b * c..(b + 1) * c]).expect("bigint"));
    }
    out
}

/// Applies `d^j` to a cochain.
pub fn apply_differential(m: &GModule, j: i64, z: &[BigInt]) -> Vec<BigInt> {
    let d = Complex::new(m).differential::<BigInt>(j).expect("bigint");
    let mut out: Vec<BigInt> = d
        .rows
        .iter()
        .map(|row| row.iter().map(|(c, x)| x * &z[*c]).sum())
        .collect();
    reduce(&Complex::new(m).moduli(j + 1), &mut out);
    out
}
