//! Phantom extensions through the row-membership criterion.
//!
//! For `α: R -> M` with `e_1 = α(1), e_2, …, e_n` generating `M` and relation
//! columns `(b_1j, …, b_nj)`, `α` is cl-phantom exactly when the top row
//! `(b_11, …, b_1m)` lies in the closure, inside `R^m`, of the span of the
//! remaining rows.

use super::Closure;
use crate::error::{Error, Result};
use crate::fpmod::{FPModule, Submodule};
use crate::gb::FreeElem;
use crate::ring::QuotientRing;

#[derive(Clone, Debug)]
pub struct PhantomInstance {
    ring: QuotientRing,
    nrows: usize,
    columns: Vec<FreeElem>,
    /// Degrees making every row homogeneous in `R^m`.
    shifts: Vec<i64>,
}

impl PhantomInstance {
    /// `columns` are relation columns on `nrows` generators, the first of
    /// which is the image of 1. Zero columns are dropped.
    pub fn new(ring: &QuotientRing, gen_degrees: &[i64], columns: Vec<FreeElem>) -> Result<PhantomInstance> {
        let nrows = gen_degrees.len();
        if nrows == 0 {
            return Err(Error::Precondition("a phantom instance needs at least one generator".into()));
        }
        let mut kept = Vec::new();
        let mut col_degrees = Vec::new();
        for c in columns {
            if c.rank() != nrows {
                return Err(Error::Context(format!(
                    "relation column of length {} for {nrows} generators",
                    c.rank()
                )));
            }
            let c = ring.reduce_vec(&c);
            if c.is_zero() {
                continue;
            }
            col_degrees.push(c.degree(ring.weights(), gen_degrees).ok_or_else(|| {
                Error::Inhomogeneous(format!("relation column {c} is not homogeneous"))
            })?);
            kept.push(c);
        }
        let top = col_degrees.iter().copied().max().unwrap_or(0);
        Ok(PhantomInstance {
            ring: ring.clone(),
            nrows,
            columns: kept,
            shifts: col_degrees.iter().map(|d| top - d).collect(),
        })
    }

    /// The inclusion of `R` as the first generator of `M`, read off `M`'s
    /// presentation.
    pub fn from_module(m: &FPModule) -> Result<PhantomInstance> {
        Self::new(m.ring(), m.degrees(), m.relations().to_vec())
    }

    /// The map `R -> M`, `1 -> u`: presents `M` with an extra first generator
    /// `e_0 = u`, adding the column `(-1, u)` to the columns `(0, r)`.
    pub fn from_map(m: &FPModule, u: &FreeElem) -> Result<PhantomInstance> {
        m.check_elem(u)?;
        let ring = m.ring();
        let du = m
            .degree_of(u)
            .ok_or_else(|| Error::Inhomogeneous(format!("{u} is not homogeneous")))?;
        let mut degrees = vec![du];
        degrees.extend_from_slice(m.degrees());
        let minus_one = FreeElem::from_poly(-&ring.one());
        let mut cols = vec![minus_one.concat(u)];
        for r in m.relations() {
            cols.push(FreeElem::zero(ring.poly(), 1).concat(r));
        }
        Self::new(ring, &degrees, cols)
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// The ambient `R^m`.
    pub fn row_module(&self) -> FPModule {
        FPModule::free(&self.ring, self.shifts.clone())
    }

    pub fn row(&self, i: usize) -> FreeElem {
        let comps = self.columns.iter().map(|c| c.comp(i).clone()).collect();
        FreeElem::new(self.ring.poly(), comps).expect("columns share the ring")
    }

    pub fn top_row(&self) -> FreeElem {
        self.row(0)
    }

    /// Span of rows `2..n`.
    pub fn other_rows(&self) -> Result<Submodule> {
        Submodule::new(&self.row_module(), (1..self.nrows).map(|i| self.row(i)).collect())
    }
}

/// Whether the instance is cl-phantom. With no relations the extension
/// splits and the answer is `true`.
pub fn phantom_test(cl: &dyn Closure, inst: &PhantomInstance) -> Result<bool> {
    if inst.ncols() == 0 {
        return Ok(true);
    }
    let b = inst.other_rows()?;
    let top = inst.top_row();
    if b.contains(&top) {
        return Ok(true);
    }
    cl.contains(&b, &top)
}
