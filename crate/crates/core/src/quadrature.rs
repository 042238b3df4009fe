//! Adaptive Simpson quadrature.

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out before every panel converged.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    pub rel_tol: f64,
    pub max_evaluations: usize,
    pub max_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self { rel_tol: 1.0e-8, max_evaluations: 1_000_000, max_depth: 50 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl AdaptiveSimpson {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Integral {
        if a == b {
            return Integral { value: 0.0, evaluations: 0, converged: true };
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = simpson(a, b, fa, fm, fb);
        let mut state = State { evaluations: 3, converged: true };
        // The tolerance is taken relative to the coarse whole-interval estimate.
        let abs_tol = self.rel_tol * whole.abs().max(f64::MIN_POSITIVE);
        let panel = Panel { a, b, fa, fm, fb, whole };
        let value = self.refine(&mut f, panel, abs_tol, self.max_depth, &mut state);
        Integral { value, evaluations: state.evaluations, converged: state.converged }
    }

    fn refine<F: FnMut(f64) -> f64>(&self, f: &mut F, p: Panel, tol: f64, depth: u32, state: &mut State) -> f64 {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        state.evaluations += 2;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth == 0 || state.evaluations >= self.max_evaluations {
            state.converged = false;
            return left + right + delta / 15.0;
        }
        let l = Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
        let r = Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
        self.refine(f, l, 0.5 * tol, depth - 1, state) + self.refine(f, r, 0.5 * tol, depth - 1, state)
    }
}

struct State {
    evaluations: usize,
    converged: bool,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
