use chrono::Timelike;

/// Whether `t` falls in a skipped window centred on :00 or :30 with the given
/// half width in minutes.
pub fn in_blackout_window<T: Timelike>(t: &T, half_width_min: u32) -> bool {
    let m = t.minute();
    let w = half_width_min;
    m >= 60u32.saturating_sub(w) || m < w || (m + w >= 30 && m < 30 + w)
}
