//! Sign vectors in `{-1, +1}^N` with a prescribed sum.

/// Visits every vector with exactly `positives` entries equal to `+1`, in
/// lexicographic order of the set of `+1` positions.
pub(crate) fn visit(n: usize, positives: usize, visitor: &mut impl FnMut(&[i8])) {
    debug_assert!(positives <= n);
    let mut chosen: Vec<usize> = (0..positives).collect();
    let mut signs = vec![-1i8; n];
    loop {
        signs.fill(-1);
        for &i in &chosen {
            signs[i] = 1;
        }
        visitor(&signs);

        // next k-subset in lexicographic order
        let k = chosen.len();
        let Some(i) = (0..k).rev().find(|&i| chosen[i] < n - k + i) else {
            return;
        };
        chosen[i] += 1;
        for j in i + 1..k {
            chosen[j] = chosen[j - 1] + 1;
        }
    }
}
