/// State of the splitmix64 generator. Passed by value; `next` returns the
/// successor state together with the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState(pub u64);

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState(seed)
    }

    #[inline]
    pub fn next(self) -> (RngState, u64) {
        let state = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut v = state;
        v = (v ^ (v >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        v = (v ^ (v >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (RngState(state), v ^ (v >> 31))
    }

    /// In-place convenience around `next`.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let (s, v) = self.next();
        *self = s;
        v
    }
}

pub fn rng_next(s: RngState) -> (RngState, u64) {
    s.next()
}
