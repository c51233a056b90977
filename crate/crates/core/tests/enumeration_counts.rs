use bdc_core::enumeration::{enumerate_supports, EnumerationParams, Equivalence};

fn count(abs_det: Option<i64>, distinct_columns: bool, equivalence: Equivalence) -> usize {
    let params = EnumerationParams {
        n: 6,
        min_weight: 2,
        distinct_columns,
        abs_det,
        equivalence,
    };
    enumerate_supports(params).unwrap().classes.len()
}

#[test]
fn weight_and_distinct_row_filter_only() {
    // Rows distinct and of weight >= 2, columns of weight >= 2, any det.
    assert_eq!(count(None, false, Equivalence::RowColumn), 44_384);
    assert_eq!(count(None, false, Equivalence::RowColumnTranspose), 28_576);
}

#[test]
fn candidates_under_both_equivalences() {
    assert_eq!(count(Some(6), true, Equivalence::RowColumn), 263);
    assert_eq!(count(Some(6), true, Equivalence::RowColumnTranspose), 142);
}
