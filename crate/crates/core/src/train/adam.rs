/// Adam moment estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub t: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        Self { t: 0, m: vec![0.0; n_params], v: vec![0.0; n_params] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self { alpha: 0.2, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// One bias-corrected Adam update of `theta` in place.
pub fn adam_step(state: &mut AdamState, grad: &[f64], theta: &mut [f64], params: &AdamParams) {
    assert_eq!(grad.len(), theta.len(), "gradient and parameter lengths differ");
    assert_eq!(state.m.len(), theta.len(), "optimizer state and parameter lengths differ");
    state.t += 1;
    let t = state.t as i32;
    let bc1 = 1.0 - params.beta1.powi(t);
    let bc2 = 1.0 - params.beta2.powi(t);
    for i in 0..theta.len() {
        let g = grad[i];
        state.m[i] = params.beta1 * state.m[i] + (1.0 - params.beta1) * g;
        state.v[i] = params.beta2 * state.v[i] + (1.0 - params.beta2) * g * g;
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        theta[i] -= params.alpha * m_hat / (v_hat.sqrt() + params.epsilon);
    }
}
