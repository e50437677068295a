//! Deterministic synthetic trace generation.
//!
//! Profiles describe piecewise-constant signals by value range, switching
//! rate and duration. Generation is seeded; the same seed always produces
//! the same traces (each trace uses its own stream of one ChaCha generator).
//! Times land on a 1/100 lattice and real values on a 1/10 lattice so the
//! emitted CSV text is exact.
//!
//! The built-in `at` profile mimics a desk-scale automatic-transmission run:
//! real-valued `speed` and `rpm`, and a discrete `gear` in 1..4 that also
//! emits indicator columns `g1`..`g4`. Gear shifts down to 1 occasionally
//! bounce straight back within 0.02 time units, which is what makes rapid
//! re-shift antecedents observable at all. The `at-gear3` variant pins the
//! gear to 3 for vacuity demonstrations.

use crate::monitor::{TimedTrace, TraceError};
use crate::rational::{rat, ratio, Rational};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariableProfile {
    /// Uniform piecewise-constant real signal in `[min, max]`, holding each
    /// value for roughly `hold` time units.
    Real {
        name: String,
        min: Rational,
        max: Rational,
        hold: Rational,
    },
    /// Discrete level signal with indicator columns `<prefix><level>`.
    Levels {
        name: String,
        indicator_prefix: String,
        levels: Vec<i64>,
        hold: Rational,
        /// Fixed level instead of random switching.
        constant: Option<i64>,
        /// (from, to, probability percent): when a switch lands on `to`
        /// coming from `from`, bounce back to `from` after 0.02 with the
        /// given probability, emitting a pre-switch sample as well.
        bounce: Option<(i64, i64, u32)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceProfile {
    pub name: String,
    pub duration: Rational,
    pub variables: Vec<VariableProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("unknown built-in profile `{0}` and no such file")]
    Unknown(String),
    #[error("invalid profile: {0}")]
    Invalid(String),
}

impl TraceProfile {
    /// The automatic-transmission-like profile: speed, rpm and gear over 30
    /// time units.
    pub fn automatic_transmission() -> TraceProfile {
        TraceProfile {
            name: "at".to_string(),
            duration: rat(30),
            variables: vec![
                VariableProfile::Real {
                    name: "speed".to_string(),
                    min: rat(0),
                    max: rat(160),
                    hold: ratio(5, 2),
                },
                VariableProfile::Real {
                    name: "rpm".to_string(),
                    min: rat(600),
                    max: rat(6000),
                    hold: ratio(5, 2),
                },
                VariableProfile::Levels {
                    name: "gear".to_string(),
                    indicator_prefix: "g".to_string(),
                    levels: vec![1, 2, 3, 4],
                    hold: rat(3),
                    constant: None,
                    bounce: Some((2, 1, 35)),
                },
            ],
        }
    }

    /// The same signals with the gear pinned to 3.
    pub fn automatic_transmission_gear3() -> TraceProfile {
        let mut profile = TraceProfile::automatic_transmission();
        profile.name = "at-gear3".to_string();
        for var in &mut profile.variables {
            if let VariableProfile::Levels { constant, bounce, .. } = var {
                *constant = Some(3);
                *bounce = None;
            }
        }
        profile
    }

    /// Resolves a profile argument: a built-in name or a JSON profile file.
    pub fn resolve(spec: &str) -> Result<TraceProfile, ProfileError> {
        match spec {
            "at" => Ok(TraceProfile::automatic_transmission()),
            "at-gear3" => Ok(TraceProfile::automatic_transmission_gear3()),
            path => {
                let text = std::fs::read_to_string(path)
                    .map_err(|_| ProfileError::Unknown(spec.to_string()))?;
                TraceProfile::from_json(&text)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<TraceProfile, ProfileError> {
        let raw: RawProfile =
            serde_json::from_str(text).map_err(|e| ProfileError::Invalid(e.to_string()))?;
        raw.build()
    }
}

#[derive(Deserialize)]
struct RawProfile {
    name: String,
    duration: String,
    variables: Vec<RawVariable>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawVariable {
    Real {
        name: String,
        min: String,
        max: String,
        hold: String,
    },
    Levels {
        name: String,
        #[serde(default)]
        indicators: Option<String>,
        levels: Vec<i64>,
        hold: String,
        #[serde(default)]
        constant: Option<i64>,
    },
}

impl RawProfile {
    fn build(self) -> Result<TraceProfile, ProfileError> {
        let parse = |s: &str| {
            crate::rational::parse_rational(s).map_err(|e| ProfileError::Invalid(e.to_string()))
        };
        let duration = parse(&self.duration)?;
        if duration <= Rational::zero() {
            return Err(ProfileError::Invalid("duration must be positive".into()));
        }
        let mut variables = Vec::new();
        for raw in self.variables {
            variables.push(match raw {
                RawVariable::Real { name, min, max, hold } => {
                    let (min, max, hold) = (parse(&min)?, parse(&max)?, parse(&hold)?);
                    if min > max || hold <= Rational::zero() {
                        return Err(ProfileError::Invalid(format!("bad range for `{name}`")));
                    }
                    VariableProfile::Real { name, min, max, hold }
                }
                RawVariable::Levels {
                    name,
                    indicators,
                    levels,
                    hold,
                    constant,
                } => {
                    if levels.is_empty() {
                        return Err(ProfileError::Invalid(format!("`{name}` has no levels")));
                    }
                    VariableProfile::Levels {
                        indicator_prefix: indicators.unwrap_or_else(|| format!("{name}_")),
                        name,
                        levels,
                        hold: parse(&hold)?,
                        constant,
                        bounce: None,
                    }
                }
            });
        }
        Ok(TraceProfile {
            name: self.name,
            duration,
            variables,
        })
    }
}

/// Generates `count` deterministic traces; the same `(profile, count, seed)`
/// always yields identical output.
pub fn generate_synthetic_traces(
    profile: &TraceProfile,
    count: usize,
    seed: u64,
) -> Result<Vec<TimedTrace>, TraceError> {
    (0..count)
        .map(|index| generate_one(profile, seed, index))
        .collect()
}

/// One switch event of one variable.
struct Event {
    time: Rational,
    value: Rational,
}

fn generate_one(profile: &TraceProfile, seed: u64, index: usize) -> Result<TimedTrace, TraceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);

    // Per-variable event lists, then merged onto one timeline.
    let mut series: Vec<(String, Vec<Event>)> = Vec::new();
    for var in &profile.variables {
        match var {
            VariableProfile::Real { name, min, max, hold } => {
                let events = real_events(&mut rng, min, max, hold, &profile.duration);
                series.push((name.clone(), events));
            }
            VariableProfile::Levels {
                name,
                indicator_prefix,
                levels,
                hold,
                constant,
                bounce,
            } => {
                let events = level_events(
                    &mut rng,
                    levels,
                    hold,
                    *constant,
                    *bounce,
                    &profile.duration,
                );
                for level in levels {
                    let indicator: Vec<Event> = events
                        .iter()
                        .map(|e| Event {
                            time: e.time,
                            value: if e.value == rat(*level) { rat(1) } else { rat(0) },
                        })
                        .collect();
                    series.push((format!("{indicator_prefix}{level}"), indicator));
                }
                series.push((name.clone(), events));
            }
        }
    }

    let mut timestamps: BTreeSet<Rational> = BTreeSet::new();
    timestamps.insert(Rational::zero());
    timestamps.insert(profile.duration);
    for (_, events) in &series {
        for e in events {
            timestamps.insert(e.time);
        }
    }
    let times: Vec<Rational> = timestamps.into_iter().collect();

    let columns: Vec<(String, Vec<Rational>)> = series
        .into_iter()
        .map(|(name, events)| {
            let samples = times
                .iter()
                .map(|t| {
                    let idx = events.partition_point(|e| e.time <= *t) - 1;
                    events[idx].value
                })
                .collect();
            (name, samples)
        })
        .collect();

    TimedTrace::new(
        format!("{}-{seed}-{index}", profile.name),
        times,
        columns,
        Some(profile.duration),
    )
}

/// A hold duration around `hold`, jittered to [0.5, 1.5] * hold on the time
/// lattice.
fn jittered_hold(rng: &mut ChaCha8Rng, hold: &Rational) -> Rational {
    let percent = rng.random_range(50..=150u32);
    let raw = *hold * ratio(percent as i64, 100);
    snap(raw, 100)
}

/// Rounds onto the lattice of multiples of 1/denominator.
fn snap(value: Rational, denominator: i64) -> Rational {
    let scaled = (value * rat(denominator)).to_f64().unwrap_or(0.0).round() as i64;
    ratio(scaled.max(1), denominator)
}

fn real_events(
    rng: &mut ChaCha8Rng,
    min: &Rational,
    max: &Rational,
    hold: &Rational,
    duration: &Rational,
) -> Vec<Event> {
    let span_tenths = ((*max - *min) * rat(10)).to_integer();
    let draw = |rng: &mut ChaCha8Rng| {
        let offset = if span_tenths > 0 {
            rng.random_range(0..=span_tenths)
        } else {
            0
        };
        *min + ratio(offset, 10)
    };
    let mut events = vec![Event {
        time: Rational::zero(),
        value: draw(rng),
    }];
    let mut t = jittered_hold(rng, hold);
    while t <= *duration {
        events.push(Event {
            time: t,
            value: draw(rng),
        });
        t += jittered_hold(rng, hold);
    }
    events
}

fn level_events(
    rng: &mut ChaCha8Rng,
    levels: &[i64],
    hold: &Rational,
    constant: Option<i64>,
    bounce: Option<(i64, i64, u32)>,
    duration: &Rational,
) -> Vec<Event> {
    if let Some(level) = constant {
        return vec![Event {
            time: Rational::zero(),
            value: rat(level),
        }];
    }
    let mut current = levels[rng.random_range(0..levels.len())];
    let mut events = vec![Event {
        time: Rational::zero(),
        value: rat(current),
    }];
    let mut t = jittered_hold(rng, hold);
    let width = ratio(1, 50); // 0.02, inside rapid re-shift windows
    while t <= *duration {
        let mut next = current;
        while next == current && levels.len() > 1 {
            next = levels[rng.random_range(0..levels.len())];
        }
        let bouncing = matches!(
            bounce,
            Some((from, to, prob))
                if current == from && next == to && rng.random_range(0..100) < prob
        );
        if bouncing && t + width <= *duration && t - width > events.last().unwrap().time {
            // Duplicate sample just before the dip, so the pre-switch state
            // is a decision point for fine-grained windows.
            events.push(Event {
                time: t - width,
                value: rat(current),
            });
            events.push(Event {
                time: t,
                value: rat(next),
            });
            events.push(Event {
                time: t + width,
                value: rat(current),
            });
            // Gear returns to `current`; `next` was only the dip.
        } else {
            events.push(Event {
                time: t,
                value: rat(next),
            });
            current = next;
        }
        t += jittered_hold(rng, hold);
    }
    events
}
