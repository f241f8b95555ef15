use super::module::{minimal_generators, FPModule};
use super::submodule::Submodule;
use crate::error::{Error, Result};
use crate::gb::{kernel_mod, FreeElem};
use crate::polyarith::Polynomial;
use crate::ring::{ParameterSequence, QuotientRing};

#[derive(Clone, Debug)]
pub(crate) struct ResolutionState {
    degrees: Vec<Vec<i64>>,
    maps: Vec<Vec<FreeElem>>,
}

/// A minimal graded free resolution `... -> F_2 -> F_1 -> F_0`, truncated.
///
/// `maps[i]` holds the columns of `d_{i+1}: F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: QuotientRing,
    pub degrees: Vec<Vec<i64>>,
    pub maps: Vec<Vec<FreeElem>>,
}

impl FreeResolution {
    pub fn rank(&self, i: usize) -> usize {
        self.degrees.get(i).map_or(0, |d| d.len())
    }

    /// Every consecutive composite `d_i ∘ d_{i+1}` vanishes in the ring.
    pub fn composites_vanish(&self) -> bool {
        for i in 1..self.maps.len() {
            let (upper, lower) = (&self.maps[i], &self.maps[i - 1]);
            for col in upper {
                let mut acc = FreeElem::zero(self.ring.poly(), self.rank(i - 1));
                for (c, img) in col.comps().iter().zip(lower) {
                    acc = acc.add(&img.scale(c));
                }
                if !self.ring.reduce_vec(&acc).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Every differential entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.maps
            .iter()
            .flatten()
            .all(|c| c.comps().iter().all(|p| p.is_zero() || !p.is_constant()))
    }

    /// Index of the last nonzero free module.
    pub fn length(&self) -> usize {
        (0..self.degrees.len()).rev().find(|&i| self.rank(i) > 0).unwrap_or(0)
    }
}

fn column_degrees(ring: &QuotientRing, shifts: &[i64], cols: &[FreeElem]) -> Vec<i64> {
    cols.iter()
        .map(|c| c.degree(ring.weights(), shifts).expect("minimal columns are homogeneous"))
        .collect()
}

fn next_syzygies(ring: &QuotientRing, shifts: &[i64], cols: &[FreeElem]) -> Result<Vec<FreeElem>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let degrees = column_degrees(ring, shifts, cols);
    let ker = kernel_mod(
        ring.poly(),
        ring.order(),
        shifts.len(),
        cols,
        &[],
        &ring.ideal_gens(),
    )?;
    Ok(minimal_generators(ring, cols.len(), &degrees, &ker, &[]))
}

impl FPModule {
    /// Minimal free resolution up to homological degree `length`.
    pub fn free_resolution(&self, length: usize) -> Result<FreeResolution> {
        let mut guard = self
            .resolution_state()
            .lock()
            .map_err(|_| Error::Domain("resolution cache poisoned".into()))?;
        if guard.is_none() {
            let min = self.minimal_presentation();
            *guard = Some(ResolutionState {
                degrees: vec![min.degrees().to_vec()],
                maps: Vec::new(),
            });
            let state = guard.as_mut().expect("just set");
            let cols = min.relations().to_vec();
            state.degrees.push(column_degrees(self.ring(), min.degrees(), &cols));
            state.maps.push(cols);
        }
        let state = guard.as_mut().expect("initialized");
        let ring = self.ring();
        while state.maps.len() < length {
            let i = state.maps.len();
            let cols = next_syzygies(ring, &state.degrees[i - 1], &state.maps[i - 1])?;
            state.degrees.push(column_degrees(ring, &state.degrees[i], &cols));
            state.maps.push(cols);
        }
        Ok(FreeResolution {
            ring: ring.clone(),
            degrees: state.degrees[..=length].to_vec(),
            maps: state.maps[..length].to_vec(),
        })
    }

    /// `syz^d(M)`: the image of `d_d`, presented as the cokernel of `d_{d+1}`.
    pub fn syzygy(&self, d: usize) -> Result<FPModule> {
        if d == 0 {
            return Ok(self.minimal_presentation());
        }
        let res = self.free_resolution(d + 1)?;
        FPModule::new(&self.ring().clone(), res.degrees[d].clone(), res.maps[d].clone())
    }

    /// The module viewed over the ambient polynomial ring, with the defining
    /// ideal added to the relations.
    pub fn over_ambient(&self) -> Result<FPModule> {
        let ring = self.ring();
        let ambient = QuotientRing::polynomial(ring.poly(), ring.weights().to_vec(), ring.order().clone())?;
        FPModule::new(&ambient, self.degrees().to_vec(), self.relations_with_quotient(&[]))
    }

    /// Depth via Auslander-Buchsbaum over the ambient polynomial ring; `None`
    /// for the zero module.
    pub fn depth(&self) -> Result<Option<usize>> {
        if self.is_zero_module() {
            return Ok(None);
        }
        let over = self.over_ambient()?;
        let n = self.ring().nvars();
        let res = over.free_resolution(n + 1)?;
        let pd = res.length();
        Ok(Some(n - pd))
    }

    /// Least element of `((prefix) M :_M x)` outside `(prefix) M`, ordered by
    /// degree and then leading term, reduced modulo `(prefix) M`.
    pub(crate) fn colon_witness(&self, prefix: &[Polynomial], x: &Polynomial) -> Result<Option<FreeElem>> {
        let n = Submodule::ideal_times(self, prefix);
        let colon = n.colon(x)?;
        let mut bad: Vec<FreeElem> = colon
            .gens()
            .iter()
            .filter(|g| !n.contains(g))
            .map(|g| n.normal_form(g))
            .collect();
        let ord = self.ring().module_order();
        let weights = self.ring().weights().to_vec();
        bad.sort_by(|a, b| {
            let da = a.degree(&weights, self.degrees());
            let db = b.degree(&weights, self.degrees());
            da.cmp(&db).then_with(|| compare_leads(a, b, &ord))
        });
        Ok(bad.into_iter().next())
    }

    /// Checks whether `xs` is a regular sequence on the module.
    pub fn regular_sequence(&self, xs: &ParameterSequence) -> Result<RegularityReport> {
        self.ring().check_same(xs.ring())?;
        let mut prefix: Vec<Polynomial> = Vec::new();
        for (i, x) in xs.elems().iter().enumerate() {
            if let Some(witness) = self.colon_witness(&prefix, x)? {
                return Ok(RegularityReport {
                    regular: false,
                    failure: Some(RegularityFailure::ZeroDivisor { index: i, witness }),
                });
            }
            prefix.push(x.clone());
        }
        let all = Submodule::ideal_times(self, &prefix);
        if (0..self.ngens()).all(|k| all.contains(&self.gen(k))) {
            return Ok(RegularityReport {
                regular: false,
                failure: Some(RegularityFailure::QuotientVanishes),
            });
        }
        Ok(RegularityReport {
            regular: true,
            failure: None,
        })
    }
}

fn compare_leads(a: &FreeElem, b: &FreeElem, ord: &crate::gb::ModuleOrder) -> std::cmp::Ordering {
    let lead = |v: &FreeElem| {
        let mut best: Option<(usize, crate::polyarith::Monomial)> = None;
        for (i, p) in v.comps().iter().enumerate() {
            for (m, _) in p.terms() {
                let better = match &best {
                    None => true,
                    Some((j, bm)) => ord.cmp_terms(i, m, *j, bm) == std::cmp::Ordering::Greater,
                };
                if better {
                    best = Some((i, m.clone()));
                }
            }
        }
        best
    };
    match (lead(a), lead(b)) {
        (Some((i, m)), Some((j, n))) => ord.cmp_terms(i, &m, j, &n),
        (x, y) => x.is_some().cmp(&y.is_some()),
    }
}

/// Why a sequence fails to be regular on a module.
#[derive(Clone, Debug, PartialEq)]
pub enum RegularityFailure {
    /// `witness` lies in `((x_1..x_index) M :_M x_(index+1))` but not in `(x_1..x_index) M`.
    ZeroDivisor { index: usize, witness: FreeElem },
    /// `M = (xs) M`.
    QuotientVanishes,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub regular: bool,
    pub failure: Option<RegularityFailure>,
}
