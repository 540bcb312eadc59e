//! Left/right stabilizer and annihilator algebras of matrix codes, computed
//! through explicit homogeneous linear systems, plus verification of the
//! structural lower bounds for subspace subcodes and coordinate restrictions.
//!
//! For a code with basis `(G_1, ..., G_{k'})` and dual basis `(H_i)`, a matrix
//! `A` is in the left stabilizer iff `Unfold(H_i)(G_jᵀ ⊗ I_m) vec(A) = 0` for
//! all pairs `(i, j)`; those rows equal `vec(H_i G_jᵀ)`, which is how they are
//! assembled here (one m×m product per row instead of a Kronecker product —
//! a dedicated test pins the equality). The left annihilator uses the rows of
//! `G_jᵀ ⊗ I_m` alone. Right-side variants transpose the code, compute on the
//! left, and transpose back. Dimensions follow rank–nullity exactly:
//! `dim = s² − rk(M_S)` with `s = m` (left) or `s = n` (right).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::QBasis;
use crate::fq::FqCtx;
use crate::gabidulin::GabCode;
use crate::linalg::{self, MatFq, MatrixCodeBasis, RowReducer};
use crate::subcodes::{self, GeneralizedRestriction, SubspaceV};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AlgebraKind {
    Stabilizer,
    Annihilator,
}

/// Computed basis of a stabilizer or annihilator algebra, in RREF-canonical
/// form (the kernel basis of the defining system).
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub side: Side,
    pub kind: AlgebraKind,
    pub dim: usize,
    pub gens: Vec<MatFq>,
}

/// Rows of the defining system for the LEFT algebra of `code`, invoking
/// `emit` per row until it returns false.
fn left_system_rows(
    ctx: &FqCtx,
    code: &MatrixCodeBasis,
    kind: AlgebraKind,
    emit: &mut dyn FnMut(Vec<u16>) -> bool,
) {
    let Some((m, n)) = code.shape() else { return };
    match kind {
        AlgebraKind::Annihilator => {
            // (G_jᵀ ⊗ I_m) vec(A) = 0: for each generator, column c and row r,
            // the row has G_j[s, c] at vec-index s·m + r.
            for g in code.gens() {
                for c in 0..n {
                    for r in 0..m {
                        let mut row = vec![0u16; m * m];
                        for s in 0..m {
                            row[s * m + r] = g.get(s, c);
                        }
                        if !emit(row) {
                            return;
                        }
                    }
                }
            }
        }
        AlgebraKind::Stabilizer => {
            // Unfold(H_i)(G_jᵀ ⊗ I_m) = vec(H_i G_jᵀ) for every dual basis
            // element H_i.
            let dual = linalg::matrix_code_dual(ctx, code, m, n);
            for h in &dual {
                for g in code.gens() {
                    let prod = linalg::mul(ctx, h, &g.transpose()).expect("shapes agree");
                    if !emit(linalg::vec_col(&prod)) {
                        return;
                    }
                }
            }
        }
    }
}

fn oriented(code: &MatrixCodeBasis, side: Side) -> MatrixCodeBasis {
    match side {
        Side::Left => code.clone(),
        Side::Right => code.transposed(),
    }
}

/// Stabilizer or annihilator algebra of a matrix code.
///
/// An empty code yields the full matrix algebra / full space, matching the
/// definitions.
pub fn algebra(ctx: &FqCtx, code: &MatrixCodeBasis, side: Side, kind: AlgebraKind) -> AlgebraBasis {
    let work = oriented(code, side);
    let s = work.shape().map_or(0, |(rows, _)| rows);
    let mut red = RowReducer::new(ctx, s * s);
    left_system_rows(ctx, &work, kind, &mut |row| {
        red.add_row(&row);
        true
    });
    let gens: Vec<MatFq> = red
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let a = linalg::fold(s, &v).expect("kernel vector has length s^2");
            match side {
                Side::Left => a,
                Side::Right => a.transpose(),
            }
        })
        .collect();
    AlgebraBasis {
        side,
        kind,
        dim: gens.len(),
        gens,
    }
}

/// Dimension only (full elimination, no early exit).
pub fn algebra_dim(ctx: &FqCtx, code: &MatrixCodeBasis, side: Side, kind: AlgebraKind) -> usize {
    let work = oriented(code, side);
    let s = work.shape().map_or(0, |(rows, _)| rows);
    let mut red = RowReducer::new(ctx, s * s);
    left_system_rows(ctx, &work, kind, &mut |row| {
        red.add_row(&row);
        true
    });
    s * s - red.rank()
}

/// True iff the stabilizer on the given side is exactly the scalar matrices
/// (dimension 1). Stops eliminating as soon as the rank forces dimension 1,
/// which keeps the filter cheap on large random codes.
pub fn is_trivial_stab(ctx: &FqCtx, code: &MatrixCodeBasis, side: Side) -> bool {
    let work = oriented(code, side);
    let Some((s, _)) = work.shape() else {
        return false;
    };
    let target = s * s - 1;
    let mut red = RowReducer::new(ctx, s * s);
    left_system_rows(ctx, &work, AlgebraKind::Stabilizer, &mut |row| {
        red.add_row(&row);
        red.rank() < target
    });
    red.rank() == target
}

// ---------------------------------------------------------------------------
// Structural bounds
// ---------------------------------------------------------------------------

/// Dimensions and witness checks for the expanded subspace subcode of a
/// Gabidulin code (m = n).
#[derive(Clone, Debug, Serialize)]
pub struct StructuralBoundsReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub subcode_dim: usize,
    pub right_stab_dim: usize,
    pub right_stab_bound: usize,
    pub left_ann_dim: usize,
    pub left_ann_bound: usize,
    pub left_stab_dim: usize,
    pub left_stab_bound: usize,
    pub multiplication_witnesses_checked: usize,
    pub annihilator_witnesses_checked: usize,
}

/// Verify the structural lower bounds on a Gabidulin subspace subcode and
/// construct the explicit witnesses: the multiplication matrices `N_α` in the
/// support basis, and the annihilator maps vanishing on `V` in an adapted
/// basis. Errors on any violated bound or witness outside its algebra.
pub fn verify_structural_bounds(
    code: &GabCode,
    basis: &QBasis,
    v: &SubspaceV,
) -> Result<StructuralBoundsReport> {
    let field = code.field().clone();
    let ctx = field.fq();
    let m = field.m();
    let n = code.n();
    if m != n {
        return Err(Error::Param(
            "structural bounds are stated for m = n".into(),
        ));
    }
    let s = v.dim();
    let words = subcodes::subspace_subcode(code, v)?;
    let gens: Vec<MatFq> = words.iter().map(|w| basis.expand_mat(&field, w)).collect();
    let mat_code = MatrixCodeBasis::new(ctx, gens)?;

    let right_stab = algebra(ctx, &mat_code, Side::Right, AlgebraKind::Stabilizer);
    let left_stab = algebra(ctx, &mat_code, Side::Left, AlgebraKind::Stabilizer);
    let left_ann = algebra(ctx, &mat_code, Side::Left, AlgebraKind::Annihilator);

    let right_bound = m;
    let ann_bound = m * (m - s);
    let stab_bound = m * (m - s) + 1;
    if right_stab.dim < right_bound {
        return Err(Error::Param(format!(
            "right stabilizer dim {} below bound {right_bound}",
            right_stab.dim
        )));
    }
    if left_ann.dim < ann_bound {
        return Err(Error::Param(format!(
            "left annihilator dim {} below bound {ann_bound}",
            left_ann.dim
        )));
    }
    if left_stab.dim < stab_bound {
        return Err(Error::Param(format!(
            "left stabilizer dim {} below bound {stab_bound}",
            left_stab.dim
        )));
    }

    // Ann ⊆ Stab on both sides.
    check_contained(ctx, &left_ann, &left_stab)?;
    let right_ann = algebra(ctx, &mat_code, Side::Right, AlgebraKind::Annihilator);
    check_contained(ctx, &right_ann, &right_stab)?;

    // Span of the code (unfolded) for membership checks.
    let mut code_span = RowReducer::new(ctx, m * n);
    for g in mat_code.gens() {
        code_span.add_row(&linalg::unfold(g));
    }
    // Span of the computed right stabilizer.
    let mut rstab_span = RowReducer::new(ctx, n * n);
    for a in &right_stab.gens {
        rstab_span.add_row(&linalg::unfold(a));
    }

    // Multiplication witnesses N_α: matrix of x ↦ αx in the support basis.
    // Column j holds the support coordinates of α·g_j.
    let support_basis = QBasis::new(&field, code.support().to_vec())?;
    let mut mult_checked = 0;
    let mut witness_alphas = vec![field.gen()];
    let mut seed_rng = crate::rng::Seed::from_bytes([0x5a; 32]).rng();
    witness_alphas.push(field.rand_nonzero(&mut seed_rng));
    witness_alphas.push(field.rand_nonzero(&mut seed_rng));
    for alpha in &witness_alphas {
        let mut n_alpha = MatFq::zeros(n, n);
        for j in 0..n {
            let img = field.mul(alpha, &code.support()[j]);
            let coords = support_basis.phi(&field, &img);
            for (i, &c) in coords.iter().enumerate() {
                n_alpha.set(i, j, c);
            }
        }
        // Direct stabilizer membership: X·N_α stays in the code.
        for x in mat_code.gens() {
            let moved = linalg::mul(ctx, x, &n_alpha)?;
            if !code_span.contains(&linalg::unfold(&moved)) {
                return Err(Error::Param(
                    "multiplication witness does not stabilize the code".into(),
                ));
            }
        }
        if !rstab_span.contains(&linalg::unfold(&n_alpha)) {
            return Err(Error::Param(
                "multiplication witness missing from the computed right stabilizer".into(),
            ));
        }
        mult_checked += 1;
    }

    // Annihilator witnesses: maps vanishing on V, built in an adapted basis.
    let adapted = adapted_basis(&field, v)?;
    let mut lann_span = RowReducer::new(ctx, m * m);
    for a in &left_ann.gens {
        lann_span.add_row(&linalg::unfold(a));
    }
    let mut ann_checked = 0;
    for w in s..m {
        for u in 0..m {
            // T sends adapted e_w to the u-th basis element of B, the rest
            // of the adapted basis to zero.
            let t_images: Vec<_> = (0..m)
                .map(|i| {
                    if i == w {
                        basis.elements()[u].clone()
                    } else {
                        field.zero()
                    }
                })
                .collect();
            let m_t = endo_matrix(&field, basis, &adapted, &t_images)?;
            for x in mat_code.gens() {
                let prod = linalg::mul(ctx, &m_t, x)?;
                if !prod.is_zero() {
                    return Err(Error::Param(
                        "annihilator witness does not annihilate the code".into(),
                    ));
                }
            }
            if !lann_span.contains(&linalg::unfold(&m_t)) {
                return Err(Error::Param(
                    "annihilator witness missing from the computed left annihilator".into(),
                ));
            }
            ann_checked += 1;
        }
    }

    Ok(StructuralBoundsReport {
        m,
        n,
        k: code.k(),
        s,
        subcode_dim: words.len(),
        right_stab_dim: right_stab.dim,
        right_stab_bound: right_bound,
        left_ann_dim: left_ann.dim,
        left_ann_bound: ann_bound,
        left_stab_dim: left_stab.dim,
        left_stab_bound: stab_bound,
        multiplication_witnesses_checked: mult_checked,
        annihilator_witnesses_checked: ann_checked,
    })
}

/// Coordinate-restriction variant: for `W = V_1 × ... × V_n` with
/// `r = dim(V_1 + ... + V_n) < m`, the left annihilator of the expanded
/// restricted subcode has dimension at least `m(m−r)`.
#[derive(Clone, Debug, Serialize)]
pub struct CoordRestrictionReport {
    pub m: usize,
    pub r: usize,
    pub subcode_dim: usize,
    pub left_ann_dim: usize,
    pub left_ann_bound: usize,
    pub left_stab_dim: usize,
    pub left_stab_bound: usize,
}

pub fn verify_coord_restriction_bound(
    code: &crate::gabidulin::LambdaGabCode,
    basis: &QBasis,
    w: &GeneralizedRestriction,
) -> Result<CoordRestrictionReport> {
    let field = code.field().clone();
    let ctx = field.fq();
    let m = field.m();
    let r = w.sum_dim(&field);
    if r >= m {
        return Err(Error::Param(format!(
            "coordinate restriction bound needs dim(ΣV_i) = {r} < m = {m}"
        )));
    }
    let words = subcodes::generalized_subcode(code, w)?;
    let gens: Vec<MatFq> = words.iter().map(|x| basis.expand_mat(&field, x)).collect();
    let mat_code = MatrixCodeBasis::new(ctx, gens)?;
    let left_ann = algebra_dim(ctx, &mat_code, Side::Left, AlgebraKind::Annihilator);
    let left_stab = algebra_dim(ctx, &mat_code, Side::Left, AlgebraKind::Stabilizer);
    let ann_bound = m * (m - r);
    let stab_bound = m * (m - r) + 1;
    if left_ann < ann_bound {
        return Err(Error::Param(format!(
            "left annihilator dim {left_ann} below bound {ann_bound}"
        )));
    }
    if left_stab < stab_bound {
        return Err(Error::Param(format!(
            "left stabilizer dim {left_stab} below bound {stab_bound}"
        )));
    }
    Ok(CoordRestrictionReport {
        m,
        r,
        subcode_dim: words.len(),
        left_ann_dim: left_ann,
        left_ann_bound: ann_bound,
        left_stab_dim: left_stab,
        left_stab_bound: stab_bound,
    })
}

fn check_contained(ctx: &FqCtx, inner: &AlgebraBasis, outer: &AlgebraBasis) -> Result<()> {
    let Some(first) = outer.gens.first() else {
        if inner.gens.is_empty() {
            return Ok(());
        }
        return Err(Error::Param("annihilator not contained in stabilizer".into()));
    };
    let len = first.rows() * first.cols();
    let mut span = RowReducer::new(ctx, len);
    for g in &outer.gens {
        span.add_row(&linalg::unfold(g));
    }
    for g in &inner.gens {
        if !span.contains(&linalg::unfold(g)) {
            return Err(Error::Param("annihilator not contained in stabilizer".into()));
        }
    }
    Ok(())
}

/// Extend the basis of V to a full `F_q`-basis of `F_{q^m}` (greedy over the
/// power basis).
fn adapted_basis(field: &crate::field::Field, v: &SubspaceV) -> Result<QBasis> {
    let mut elems = v.basis().to_vec();
    for cand in field.power_basis().elements() {
        if elems.len() == field.m() {
            break;
        }
        let mut trial = elems.clone();
        trial.push(cand.clone());
        if field.rank_weight(&trial) == trial.len() {
            elems.push(cand.clone());
        }
    }
    QBasis::new(field, elems)
}

/// Matrix, in basis B, of the `F_q`-linear endomorphism defined by its images
/// on an adapted basis.
fn endo_matrix(
    field: &crate::field::Field,
    b: &QBasis,
    adapted: &QBasis,
    images_of_adapted: &[crate::field::ExtElem],
) -> Result<MatFq> {
    let m = field.m();
    let mut out = MatFq::zeros(m, m);
    for j in 0..m {
        // T(b_j) = sum_w coords_adapted(b_j)_w · images[w].
        let coords = adapted.phi(field, &b.elements()[j]);
        let mut img = field.zero();
        for (w, &c) in coords.iter().enumerate() {
            if c != 0 {
                img = field.add(&img, &field.scale(&images_of_adapted[w], c));
            }
        }
        let cols = b.phi(field, &img);
        for (i, &c) in cols.iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::sync::Arc;

    fn random_code(
        ctx: &FqCtx,
        m: usize,
        n: usize,
        dim: usize,
        rng: &mut ChaCha20Rng,
    ) -> MatrixCodeBasis {
        let mut gens = Vec::new();
        let mut red = RowReducer::new(ctx, m * n);
        while gens.len() < dim {
            let g = MatFq::random(ctx, m, n, rng);
            if red.add_row(&linalg::unfold(&g)) {
                gens.push(g);
            }
        }
        MatrixCodeBasis::new(ctx, gens).unwrap()
    }

    /// Exhaustive oracle: enumerate all q^(s,s) candidate matrices.
    fn brute_force_dim(
        ctx: &FqCtx,
        code: &MatrixCodeBasis,
        side: Side,
        kind: AlgebraKind,
    ) -> usize {
        let work = oriented(code, side);
        let (s, n) = work.shape().unwrap();
        let q = ctx.q() as u64;
        let total = q.pow((s * s) as u32);
        let mut span = RowReducer::new(ctx, s * n);
        for g in work.gens() {
            span.add_row(&linalg::unfold(g));
        }
        let mut count = 0u64;
        for idx in 0..total {
            let mut a = MatFq::zeros(s, s);
            let mut v = idx;
            for r in 0..s {
                for c in 0..s {
                    a.set(r, c, (v % q) as u16);
                    v /= q;
                }
            }
            let ok = work.gens().iter().all(|g| {
                let prod = linalg::mul(ctx, &a, g).unwrap();
                match kind {
                    AlgebraKind::Annihilator => prod.is_zero(),
                    AlgebraKind::Stabilizer => span.contains(&linalg::unfold(&prod)),
                }
            });
            if ok {
                count += 1;
            }
        }
        // count = q^dim exactly for a linear solution space.
        let mut dim = 0;
        let mut acc = 1u64;
        while acc < count {
            acc *= q;
            dim += 1;
        }
        assert_eq!(acc, count, "solution count is not a power of q");
        dim
    }

    #[test]
    fn full_space_and_zero_code() {
        let ctx = FqCtx::new(2, 1).unwrap();
        // Full space F_2^{2x3}: stabilizer is everything, annihilator zero.
        let gens: Vec<MatFq> = (0..6)
            .map(|i| {
                let mut g = MatFq::zeros(2, 3);
                g.set(i / 3, i % 3, 1);
                g
            })
            .collect();
        let code = MatrixCodeBasis::new(&ctx, gens).unwrap();
        assert_eq!(algebra_dim(&ctx, &code, Side::Left, AlgebraKind::Stabilizer), 4);
        assert_eq!(algebra_dim(&ctx, &code, Side::Left, AlgebraKind::Annihilator), 0);
        // Zero code: full algebra on both counts, and never "trivial".
        let zero = MatrixCodeBasis::new(&ctx, Vec::new()).unwrap();
        assert_eq!(algebra_dim(&ctx, &zero, Side::Left, AlgebraKind::Stabilizer), 0);
        assert!(!is_trivial_stab(&ctx, &zero, Side::Left));
    }

    #[test]
    fn kernel_method_matches_exhaustive_enumeration() {
        // Random 3-dimensional codes in F_2^{4x4}: compare against all 2^16
        // candidates on both sides and kinds.
        let ctx = FqCtx::new(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..5 {
            let code = random_code(&ctx, 4, 4, 3, &mut rng);
            for side in [Side::Left, Side::Right] {
                for kind in [AlgebraKind::Stabilizer, AlgebraKind::Annihilator] {
                    let fast = algebra(&ctx, &code, side, kind);
                    assert_eq!(fast.dim, brute_force_dim(&ctx, &code, side, kind));
                    // Every returned generator satisfies its defining
                    // property.
                    let work = oriented(&code, side);
                    let mut span = RowReducer::new(&ctx, 16);
                    for g in work.gens() {
                        span.add_row(&linalg::unfold(g));
                    }
                    for a in &fast.gens {
                        let a_work = match side {
                            Side::Left => a.clone(),
                            Side::Right => a.transpose(),
                        };
                        for g in work.gens() {
                            let prod = linalg::mul(&ctx, &a_work, g).unwrap();
                            match kind {
                                AlgebraKind::Annihilator => assert!(prod.is_zero()),
                                AlgebraKind::Stabilizer => {
                                    assert!(span.contains(&linalg::unfold(&prod)))
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stab_rows_equal_kron_formulation() {
        // vec(H G^T) = Unfold(H)(G^T ⊗ I_m) row by row.
        let ctx = FqCtx::new(2, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..10 {
            let h = MatFq::random(&ctx, 3, 4, &mut rng);
            let g = MatFq::random(&ctx, 3, 4, &mut rng);
            let direct = linalg::vec_col(&linalg::mul(&ctx, &h, &g.transpose()).unwrap());
            let kron = linalg::kron(&ctx, &g.transpose(), &MatFq::identity(3));
            let via_kron = linalg::vec_mul(&ctx, &linalg::unfold(&h), &kron).unwrap();
            assert_eq!(direct, via_kron);
        }
    }

    #[test]
    fn annihilator_contained_in_stabilizer() {
        let ctx = FqCtx::new(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..10 {
            let code = random_code(&ctx, 4, 4, 5, &mut rng);
            for side in [Side::Left, Side::Right] {
                let ann = algebra(&ctx, &code, side, AlgebraKind::Annihilator);
                let stab = algebra(&ctx, &code, side, AlgebraKind::Stabilizer);
                assert!(ann.dim <= stab.dim);
                check_contained(&ctx, &ann, &stab).unwrap();
            }
        }
    }

    #[test]
    fn stabilizer_closed_under_product_and_identity() {
        let ctx = FqCtx::new(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let code = random_code(&ctx, 4, 4, 3, &mut rng);
        let stab = algebra(&ctx, &code, Side::Left, AlgebraKind::Stabilizer);
        let mut span = RowReducer::new(&ctx, 16);
        for g in &stab.gens {
            span.add_row(&linalg::unfold(g));
        }
        assert!(span.contains(&linalg::unfold(&MatFq::identity(4))));
        for a in &stab.gens {
            for b in &stab.gens {
                let prod = linalg::mul(&ctx, a, b).unwrap();
                assert!(span.contains(&linalg::unfold(&prod)));
            }
        }
    }

    #[test]
    fn expanded_extension_linear_code_has_big_right_stabilizer() {
        // The q-ary image of an F_{q^m}-linear code carries a right
        // stabilizer of dimension >= m, so it is never "trivial".
        let f = Arc::new(make_field(2, 1, 4).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let code = GabCode::random(f.clone(), 4, 2, &mut rng).unwrap();
        let basis = QBasis::random(&f, &mut rng);
        let mut gens = Vec::new();
        for row in 0..2 {
            let r = code.gen_matrix().row(row).to_vec();
            for b in basis.elements() {
                let scaled: Vec<_> = r.iter().map(|x| f.mul(x, b)).collect();
                gens.push(basis.expand_mat(&f, &scaled));
            }
        }
        let mat_code = MatrixCodeBasis::new(f.fq(), gens).unwrap();
        let dim = algebra_dim(f.fq(), &mat_code, Side::Right, AlgebraKind::Stabilizer);
        assert!(dim >= 4, "right stabilizer dim {dim} < m");
        assert!(!is_trivial_stab(f.fq(), &mat_code, Side::Right));
    }

    #[test]
    fn random_codes_usually_trivial() {
        // 200-sample census at m=n=6, q=2, dim 9.
        let ctx = FqCtx::new(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let mut trivial = 0;
        for _ in 0..200 {
            let code = random_code(&ctx, 6, 6, 9, &mut rng);
            let left = is_trivial_stab(&ctx, &code, Side::Left);
            if left {
                assert_eq!(algebra_dim(&ctx, &code, Side::Left, AlgebraKind::Stabilizer), 1);
                trivial += 1;
            }
        }
        assert!(trivial >= 190, "only {trivial}/200 trivial");
    }
}
