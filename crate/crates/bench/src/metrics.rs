use qap_core::{Cost, QapError};

/// `(best_quality - best_known) / best_known * 100`, in percent.
pub fn relative_difference(best_quality: Cost, best_known: Cost) -> Result<f64, QapError> {
    if best_known <= 0 {
        return Err(QapError::Domain(format!(
            "best known quality must be positive, got {best_known}"
        )));
    }
    Ok((best_quality - best_known) as f64 / best_known as f64 * 100.0)
}

/// `MM:SS.t`, zero-padded, tenths truncated.
pub fn format_duration(ms: u64) -> String {
    let minutes = ms / 60_000;
    let seconds = (ms % 60_000) / 1_000;
    let tenths = (ms % 1_000) / 100;
    format!("{minutes:02}:{seconds:02}.{tenths}")
}

/// Median of a non-empty sample; the mean of the two middle values (rounded
/// down) for even sizes.
pub fn median(values: &[u64]) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_difference_examples() {
        assert_eq!(relative_difference(7_098_658, 7_098_658).unwrap(), 0.0);
        assert_eq!(relative_difference(28, 14).unwrap(), 100.0);
        let d = relative_difference(1680, 1652).unwrap();
        assert!((d - 28.0 / 1652.0 * 100.0).abs() < 1e-12);
        assert_eq!(format!("{d:.2}"), "1.69");
        assert!(relative_difference(5, 0).is_err());
    }

    #[test]
    fn duration_format() {
        assert_eq!(format_duration(10_400), "00:10.4");
        assert_eq!(format_duration(33_600), "00:33.6");
        assert_eq!(format_duration(0), "00:00.0");
        assert_eq!(format_duration(99), "00:00.0");
        assert_eq!(format_duration(1_999), "00:01.9");
        assert_eq!(format_duration(61_050), "01:01.0");
        assert_eq!(format_duration(600_000), "10:00.0");
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[5, 1, 3]), Some(3));
        assert_eq!(median(&[4, 1, 3, 10]), Some(3));
    }
}
