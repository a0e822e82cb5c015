use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Number of tokens kept at compression ratio `r`: `max(1, round(N / r))`,
/// capped at `N`.
pub(crate) fn kept_count(total: usize, r: f64) -> usize {
    if total == 0 {
        return 0;
    }
    ((total as f64 / r).round() as usize).clamp(1, total)
}

/// Hard top-K gate. Ties go to the lower token index; the result is
/// ascending.
pub fn select_tokens(scores: &[f64], r: f64) -> Vec<usize> {
    assert!(r >= 1.0, "compression ratio must be at least 1");
    let k = kept_count(scores.len(), r);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = order.into_iter().take(k).collect();
    kept.sort_unstable();
    kept
}
