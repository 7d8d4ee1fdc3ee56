//! Total unimodularity by exhaustive minors.

use super::cone::k_subsets;
use super::rat::{det_int, IVec};

/// True iff every square minor of `a` lies in `{−1, 0, 1}`.
pub fn is_totally_unimodular(a: &[IVec]) -> bool {
    if a.iter().flatten().any(|x| !(-1..=1).contains(x)) {
        return false;
    }
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    for k in 2..=rows.min(cols) {
        let row_sets = k_subsets(rows, k);
        let col_sets = k_subsets(cols, k);
        let bad = crate::par::find_first(&row_sets, |rs| {
            col_sets.iter().find_map(|cs| {
                let m: Vec<IVec> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                (det_int(&m).abs() > 1).then_some(())
            })
        });
        if bad.is_some() {
            return false;
        }
    }
    true
}
