use super::{Axis, Objective, ParamName, PerPointOptimization, SweepSpec};
use crate::channels::NoiseKind;
use crate::protocols::ProtocolParams;
use crate::states::{InitialState, WLikeCoefficients};

pub const PRESET_NAMES: [&str; 10] = [
    "fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b",
];

const STEPS: usize = 32;
const HI: f64 = 0.99;

fn axis(p: ParamName) -> Axis {
    Axis::new(p, 0.0, HI, STEPS)
}

/// The four initial states compared in the state-dependence presets. The
/// second is printed unnormalised (squared norm 5/4) and is rescaled here.
pub fn comparison_states() -> Vec<InitialState> {
    let (red, _) = WLikeCoefficients::normalized(0.5, std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
        .expect("finite coefficients");
    let green = WLikeCoefficients::new((3.0f64 / 8.0).sqrt(), (1.0f64 / 8.0).sqrt(), std::f64::consts::FRAC_1_SQRT_2)
        .expect("normalised coefficients");
    vec![
        InitialState::EqualW,
        InitialState::WLike(red),
        InitialState::WLike(green),
        InitialState::GwMixed,
    ]
}

const FIG3_NOTE: &str = "axes follow the depolarizing analysis: D1=D2=0.2, reversal strengths optimised per point";
const FIG4_NOTE: &str = "initial w:0.5,0.707106781187,0.707106781187 rescaled by 1/sqrt(1.25) to unit norm";

/// Returns the named figure preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<SweepSpec> {
    let ad = NoiseKind::AmplitudeDamping;
    let dp = NoiseKind::Depolarizing;
    let unconstrained = |which: Vec<ParamName>| {
        Some(PerPointOptimization {
            which,
            objective: Objective::Concurrence,
        })
    };
    let spec = match name {
        "fig1a" => SweepSpec::new(
            ProtocolParams::distributed(0.0, 0.0, 0.99, 0.99),
            vec![axis(ParamName::P1), axis(ParamName::P2)],
        ),
        "fig1b" => SweepSpec::new(ProtocolParams::fully_local(0.0, 0.0), vec![axis(ParamName::P3), axis(ParamName::Q3)]),
        "fig2a" => SweepSpec::new(
            ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0).with_noise(ad, 0.0, 0.0),
            vec![axis(ParamName::D1), axis(ParamName::D2)],
        ),
        "fig2b" => SweepSpec::new(
            ProtocolParams::distributed(0.0, 0.0, 0.99, 0.99).with_noise(ad, 0.6, 0.6),
            vec![axis(ParamName::P1), axis(ParamName::P2)],
        ),
        "fig2c" => SweepSpec::new(
            ProtocolParams::fully_local(0.0, 0.99).with_noise(ad, 0.0, 0.0),
            vec![axis(ParamName::P3), axis(ParamName::D)],
        ),
        "fig3a" => {
            let mut s = SweepSpec::new(
                ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0).with_noise(dp, 0.0, 0.0),
                vec![axis(ParamName::D1), axis(ParamName::D2)],
            );
            s.notes.push("depolarizing noise without measurement".into());
            s
        }
        "fig3b" => {
            let mut s = SweepSpec::new(
                ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0).with_noise(dp, 0.2, 0.2),
                vec![axis(ParamName::P1), axis(ParamName::P2)],
            );
            s.optimize = unconstrained(vec![ParamName::Q1, ParamName::Q2]);
            s.notes.push(FIG3_NOTE.into());
            s
        }
        "fig3c" => {
            let mut s = SweepSpec::new(
                ProtocolParams::fully_local(0.0, 0.0).with_noise(dp, 0.2, 0.2),
                vec![axis(ParamName::P3)],
            );
            s.optimize = unconstrained(vec![ParamName::Q3]);
            s.notes.push(FIG3_NOTE.into());
            s
        }
        "fig4a" => {
            let mut s = SweepSpec::new(
                ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0).with_noise(ad, 0.0, 0.0),
                vec![axis(ParamName::D)],
            );
            s.initials = comparison_states();
            s.notes.push(FIG4_NOTE.into());
            s
        }
        "fig4b" => {
            let mut s = SweepSpec::new(
                ProtocolParams::distributed(0.0, 0.0, 0.99, 0.99).with_noise(ad, 0.6, 0.6),
                vec![axis(ParamName::P)],
            );
            s.initials = comparison_states();
            s.notes.push(FIG4_NOTE.into());
            s
        }
        _ => return None,
    };
    Some(spec)
}
