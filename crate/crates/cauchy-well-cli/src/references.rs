//! Independently published eigenvalues of the same operator, used purely as
//! comparison columns in reports. Each set is tagged with the short label of
//! the computation it came from; none of them is treated as ground truth by
//! any test of the solver itself.

use cauchy_well_core::spectrum::ReferenceValue;

/// One external data set: a label and the six-or-more lowest levels.
pub struct ReferenceSet {
    pub tag: &'static str,
    /// `(n, value)` pairs, 1-based labels.
    pub values: &'static [(usize, f64)],
}

/// Spectral values quoted from an analytic-expansion treatment of the same
/// well; the most precise external set available.
pub const KKMS: ReferenceSet = ReferenceSet {
    tag: "KKMS",
    values: &[
        (1, 1.1577738),
        (2, 2.7547547),
        (3, 4.3168010),
        (4, 5.8921474),
        (5, 7.4601757),
        (6, 9.0328526),
        (7, 10.602293),
        (8, 12.174118),
        (9, 13.744109),
        (10, 15.315554),
    ],
};

/// Four-digit values from an earlier numerical treatment.
pub const K: ReferenceSet = ReferenceSet {
    tag: "K",
    values: &[
        (1, 1.1577),
        (2, 2.7547),
        (3, 4.3168),
        (4, 5.8921),
        (5, 7.4601),
        (6, 9.0328),
    ],
};

/// Values from a discretized-resolvent computation.
pub const ZG: ReferenceSet = ReferenceSet {
    tag: "ZG",
    values: &[
        (1, 1.1560),
        (2, 2.7534),
        (3, 4.3168),
        (4, 5.8945),
        (5, 7.4658),
        (6, 9.0427),
    ],
};

/// Values from a later refinement of the same group's method; their table
/// does not list a sixth level.
pub const ZG_FINE: ReferenceSet = ReferenceSet {
    tag: "zg",
    values: &[
        (1, 1.157776),
        (2, 2.754769),
        (3, 4.316837),
        (4, 5.892214),
        (5, 7.460282),
    ],
};

/// All external sets in presentation order.
pub const ALL: [&ReferenceSet; 4] = [&K, &KKMS, &ZG, &ZG_FINE];

/// The KKMS values as [`ReferenceValue`]s for labels `≤ max_n`, the form
/// [`cauchy_well_core::spectrum::compare_references`] consumes.
pub fn kkms_references(max_n: usize) -> Vec<ReferenceValue> {
    KKMS.values
        .iter()
        .filter(|(n, _)| *n <= max_n)
        .map(|&(n, value)| ReferenceValue {
            n,
            value,
            source: KKMS.tag.to_string(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_are_sorted_and_labeled() {
        for set in ALL {
            assert!(!set.tag.is_empty());
            assert!(set.values.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(set.values.windows(2).all(|w| w[0].1 < w[1].1));
        }
    }

    #[test]
    fn kkms_subset() {
        let refs = kkms_references(6);
        assert_eq!(refs.len(), 6);
        assert_eq!(refs[0].n, 1);
        assert!((refs[0].value - 1.1577738).abs() < 1e-12);
        assert!(kkms_references(0).is_empty());
    }
}
