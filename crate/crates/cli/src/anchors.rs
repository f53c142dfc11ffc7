//! Static table of the anchor strings a report record may carry.

/// `(anchor, statement checked)`.
pub const ANCHORS: &[(&str, &str)] = &[
    ("sector-constant-K", "closed form of the sector constant K(p, θ) and the admissibility condition"),
    ("angle-comparison", "tan ψ for R_a ≠ 0 does not exceed tan(φ − θ)"),
    ("polarization-bound", "|(R_s ξ, η)| ≤ ((R_s ξ, ξ) + (R_s η, η)) / 2"),
    ("imaginary-symmetric-bound", "|(B_s ξ, η)| ≤ tan θ ((R_s ξ, ξ) + (R_s η, η)) / 2"),
    ("sector-equivalent-form", "sector condition rewritten through R_s, R_a, B_s, B_a"),
    ("antisymmetric-bound", "|(R_a ξ, η)| ≤ tan θ ((R_s ξ, ξ) + (R_s η, η)) when B_a = 0"),
    ("positive-definiteness", "R_s, tan θ R_s ± B_s and 2 tan θ R_s ± i R_a are positive semidefinite"),
    ("trace-bound", "(Q U ξ, U ξ) ≤ tr(U* Q U) |ξ|² for positive semidefinite Q"),
    ("rotated-trace-form", "tr(U R_{s,α} Ū) ≥ 0 for symmetric U and |α| < π/2 − θ"),
    ("oleinik-bound", "|tr(∂_j C_α U)|² ≤ M tr(U R_{s,α} Ū) with M = 32 d (1 + tan(θ + |α|))² sup|∂²C|"),
    ("combined-form-bound", "(cot φ + tan θ) S ≤ K (S + (p − 2)/√(p − 1) (B_s ξ, η))"),
    ("sector-condition", "C(x) takes values in the closed sector Σ_θ"),
    ("integration-by-parts", "pairing of A u equals its quadratic-form expansion in (ξ, η)"),
    ("sectorial-estimate", "|Im (A u, |u|^{p−2} u)| ≤ K Re (A u, |u|^{p−2} u)"),
    ("rotated-accretivity", "Re (e^{iα} A u, |u|^{p−2} u) ≥ 0 and its integrand is nonnegative for |α| < ψ"),
    ("gradient-inequality", "Re Σ_j (∂_j e^{iα} A u, |∇u|^{p−2} ∂_j u) ≥ −M ‖∇u‖_p^p for |α| < γ"),
    ("semigroup-contraction", "e^{−z A} is an l_p contraction for z in Σ_γ"),
    ("numerical-range", "the l_p numerical range of −A_h lies in −Σ_{arctan K}"),
    ("resolvent-bound", "|λ| ‖(λ + A_h)^{-1}‖ ≤ 1 / sin ε on Σ_{π − arctan K − ε}"),
    ("plumbing", "harness consistency check without an analytic statement"),
];

pub fn is_known(anchor: &str) -> bool {
    ANCHORS.iter().any(|(a, _)| *a == anchor)
}

pub fn lemma_anchor(entry: &str) -> &'static str {
    match entry {
        "polarization" => "polarization-bound",
        "imaginary-symmetric" => "imaginary-symmetric-bound",
        "sector-equivalent" => "sector-equivalent-form",
        "antisymmetric" => "antisymmetric-bound",
        _ => "positive-definiteness",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors_are_unique() {
        let mut ids: Vec<_> = ANCHORS.iter().map(|a| a.0).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), ANCHORS.len());
    }

    #[test]
    fn lemma_entries_map_to_known_anchors() {
        for e in ["polarization", "imaginary-symmetric", "sector-equivalent", "antisymmetric", "positivity-real"] {
            assert!(is_known(lemma_anchor(e)));
        }
    }
}
