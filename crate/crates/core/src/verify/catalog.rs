//! Every identity the runner can report, with the formula it tests and the
//! tolerance class it is held to.

use serde::{Deserialize, Serialize};

/// Which default tolerance an identity uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceClass {
    /// No differentiation at all.
    Algebraic,
    /// Derivatives of smooth fields along `M` with analytic ingredients.
    Analytic,
    /// Passes through finite-difference Christoffels of the `2n`-metric.
    Connection,
    /// Frame-level checks: special basis, assembled frame.
    Frame,
    /// Must be exactly zero.
    Exact,
}

#[derive(Debug, Clone, Copy)]
pub struct IdentitySpec {
    pub name: &'static str,
    pub formula: &'static str,
    pub class: ToleranceClass,
}

const fn spec(name: &'static str, formula: &'static str, class: ToleranceClass) -> IdentitySpec {
    IdentitySpec { name, formula, class }
}

use ToleranceClass::*;

pub const IDENTITIES: &[IdentitySpec] = &[
    spec("consistency.vert-vert", "G(H~(d_x,d_y), nu) - G(A~_nu d_x, d_y) = 0", Connection),
    spec("consistency.vert-base", "G(H~(d_x,d_a), nu) - G(A~_nu d_x, d_a) = 0", Connection),
    spec("consistency.base-vert", "G(H~(d_a,d_x), nu) - G(A~_nu d_a, d_x) = 0", Connection),
    spec("consistency.base-base", "G(H~(d_a,d_b), nu) - G(A~_nu d_a, d_b) = 0", Connection),
    spec("display.vert-vert", "G(nabla~_{d_x} d_y, H^h+V^v) = b2 g(eta_x,eta_y) g(u,H) + (b1-a1') g(eta_x,eta_y) g(u,V) + ...", Connection),
    spec("display.vert-vert-partner", "G(nabla~_{d_x}(H^h+V^v), d_y) = (b1-a1') g(eta_x,V) g(u,eta_y) + ...", Connection),
    spec("display.vert-base", "G(nabla~_{d_x} d_a, H^h+V^v) = -1/2 a1 R(H,delta_a,u,eta_x) + A' g(H,delta_a) g(u,eta_x) + ...", Connection),
    spec("display.vert-base-partner", "G(nabla~_{d_x}(H^h+V^v), d_a) = 1/2 a1 R(H,delta_a,u,eta_x) + ...", Connection),
    spec("display.base-vert-partner", "G(nabla~_{d_a}(H^h+V^v), d_x) = 1/2 a1 R(H,delta_a,u,eta_x) + a1 g(eta_x, nabla_a V) + ...", Connection),
    spec("display.base-base", "G(nabla~_{d_a} d_b, H^h+V^v) = -a2 R(H,delta_b,u,delta_a) - ...", Connection),
    spec("display.base-base-partner", "G(nabla~_{d_a}(H^h+V^v), d_b) = a2 R(H,delta_b,u,delta_a) + ...", Connection),
    spec("consequence.vert-vert", "g(u,eta_x) g(eta_y,T) - g(u,eta_y) g(eta_x,T) = 0, T = (b1'-2a1')V + (b2'-2a2')H", Analytic),
    spec("consequence.vert-base", "g(u,b1V+b2H) g(N_a,eta_x) + 2 g(u,eta_x) g(A'H+a2'V,delta_a) + ... = 0", Analytic),
    spec("consequence.base-vert", "G((nabla_{delta_a} eta_x)^v, H^h+V^v) = 0", Analytic),
    spec("consequence.base-base", "0 = g(AH+a2V, nabla_{delta_a} delta_b) + g(BH+b2V,u) g(u, nabla_{delta_a} delta_b) + ...", Analytic),
    spec("normal.eta-s", "g(eta_x, S) = 0, S = a2H + a1V + g(u, b2H+b1V) u", Algebraic),
    spec("normal.u-s", "g(u, S) = 0", Algebraic),
    spec("normal.n-s", "g(N_a, S) = 0", Algebraic),
    spec("normal.deta-s", "g(nabla_{delta_a} eta_x, S) = 0", Algebraic),
    spec("normal.eta-ds", "g(eta_x, nabla_{delta_a} S) = 0", Analytic),
    spec("normal.u-ds", "g(u, nabla_{delta_a} S) = 0", Analytic),
    spec("normal.n-ds", "g(N_b, nabla_{delta_a} S) = 0", Analytic),
    spec("normal.du-s", "g(nabla_{delta_a} u, S) = 0", Algebraic),
    spec("normal.dn-s", "g(nabla_{delta_a} N_b, S) = 0", Analytic),
    spec("normal.delta-weights", "g(delta_a, AH + a2V) = 0", Algebraic),
    spec("normal.m-weights", "g(M_a, a2H + a1V) = 0", Algebraic),
    spec("normal.delta-weight-derivatives", "g(delta_a, A'H + a2'V) = 0", Algebraic),
    spec("normal.m-weight-derivatives", "g(M_a, a2'H + a1'V) = 0", Algebraic),
    spec("normal.mm", "g(M_b, M_a) + g(u, nabla_{delta_a} M_b) = 0", Analytic),
    spec("normal.m-delta", "g(M_b, delta_a) + g(u, nabla_{delta_b} delta_a) = 0", Algebraic),
    spec("normal.eta-delta", "g(nabla_{delta_a} eta_x, delta_b) + g(eta_x, nabla_{delta_a} delta_b) = 0", Algebraic),
    spec("normal.x-u", "X_u = g(u, b2H + b1V) = 0", Algebraic),
    spec("normal.x-eta", "X_eta = g(eta_x, b2H + b1V) = 0", Algebraic),
    spec("normal.y-eta", "Y_eta = g(eta_x, b2'H + b1'V) = 0", Algebraic),
    spec("normal.y-u", "Y_u = g(u, b2'H + b1'V) = 0", Algebraic),
    spec("normal.z-eta", "Z_eta = g(eta_x, a2'H + a1'V) = 0", Algebraic),
    spec("normal.z-u", "Z_u = g(u, a2'H + a1'V) = 0", Algebraic),
    spec("normal.eta-a", "g(eta_x, a2H + a1V) = 0", Algebraic),
    spec("normal.s-reduced", "S = a2H + a1V", Algebraic),
    spec("tangency.h", "g(H, eta_x) = 0 when a2b1 - a1b2 != 0", Analytic),
    spec("tangency.v", "g(V, eta_x) = 0 when a2b1 - a1b2 != 0", Analytic),
    spec("counterexample.circle.dt", "G(d_t, H^h+V^v) = A alpha + a2 gamma + v(a2 alpha + a1 gamma) = 0", Algebraic),
    spec("counterexample.circle.dv", "G(d_v, H^h+V^v) = a2 beta + a1 delta = 0", Algebraic),
    spec("counterexample.circle.normal-parts", "g(H,n) = beta != 0 and g(V,n) = delta != 0", Algebraic),
    spec("special-basis.orthogonality", "G(d_alpha, eta_y^h) = G(d_alpha, delta_a^v - (a1/A)(nabla_{delta_a} u)^h) = 0", Frame),
    spec("special-basis.span", "span{eta_y^h, delta_a^v - (a1/A)(nabla_{delta_a} u)^h} = normal space of LM", Frame),
    spec("sff.vert-vert", "G(nu, H~(d_x,d_y)) = g(H, b2/2 g(u,eta_x) eta_y + b2/2 g(u,eta_y) eta_x + a2' g(eta_x,eta_y) u + b2' g(u,eta_x) g(u,eta_y) u)", Connection),
    spec("sff.vert-base", "G(nu, H~(d_x,d_a)) = g(H, 1/2 a1 R(u,eta_x) delta_a) + g(H, ...) - g(V, b2/2 g(u,eta_x) delta_a)", Connection),
    spec("sff.base-base", "G(nu, H~(d_a,d_b)) = g(AH+a2V, nabla_{delta_a} delta_b) - a2 R(H,delta_b,u,delta_a) - ...", Connection),
    spec("sff.base-base-rewritten", "G[nu, (nabla delta_b)^h + (nabla nabla u)^v] - g(BH+b2V,u) g(u, nabla nabla u) - ... equals the base-base closed form", Analytic),
    spec("sff.sign-coherence", "one curvature sign convention zeroes every curvature-bearing closed form", Exact),
    spec("geodesic.vertical", "G(H~(d_x,d_y), nu) = 0 when b2 = a2' = 0", Connection),
    spec("geodesic.involutive", "[d_x, d_y] = 0", Exact),
    spec("geodesic.mixed-flat-weights", "G(H~(d_x,d_a), nu) = 0 when a1 = 0, b2 = 0, a2 = const != 0", Connection),
    spec("geodesic.mixed-constant-curvature", "G(H~(d_x,d_a), nu) = 0 on constant curvature N with a2' = 0, b2 = 0", Connection),
    spec("lift.frame-consistency", "d_a = delta_a^h + M_a^v + N_a^v equals the chart derivative of the lift", Frame),
    spec("lift.nabla-u-split", "nabla_{delta_a} u = M_a + N_a", Analytic),
];

pub fn lookup(name: &str) -> Option<&'static IdentitySpec> {
    IDENTITIES.iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_are_unique_and_sorted_within_groups() {
        let names: HashSet<_> = IDENTITIES.iter().map(|s| s.name).collect();
        assert_eq!(names.len(), IDENTITIES.len());
        assert!(lookup("normal.eta-s").is_some());
        assert!(lookup("missing").is_none());
    }
}
