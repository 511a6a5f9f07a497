#ifndef MAGMA_TESTS_ORACLE_VALUES_HPP
#define MAGMA_TESTS_ORACLE_VALUES_HPP

// Frozen outputs of structure_oracle.py (mpmath, 50 digits) and
// shooting_oracle.py (SciPy DOP853, rtol 1e-13). Regenerate with those scripts.
namespace oracle {

inline constexpr double kQStarN2 = 0.51048318071075339685;
inline constexpr double kQStarN225 = 0.53275123902687383436;
inline constexpr double kQStarN25 = 0.55250896337800283996;
inline constexpr double kQStarN3 = 0.58618017529382861835;

// d = 3, n = 2.5, c = 1.7
namespace example {
inline constexpr double kQ1 = 0.77328444663882409003;
inline constexpr double kG1AtQ1 = 0.064374981188220263678;
inline constexpr double kMu1Min = -0.021458327062740087893;
inline constexpr double kQ2 = 0.67306926489893864001;
inline constexpr double kMu2Min = -0.013857349777668788989;
inline constexpr double kQ3 = 0.76113711411790069336;
inline constexpr double kMu3Min = -0.023063586111939921219;
inline constexpr double kG3AtQStar = -0.12225132610265413038;

inline constexpr double kMuC = -0.020767505954675903;
// Tail-matched limit, stable to ~1e-10 over r in [28, 32].
inline constexpr double kQTau = 0.7375931108;
inline constexpr double kQAt5 = 0.8398917718872957;
inline constexpr double kQAt10 = 0.7498268826744382;
}  // namespace example

}  // namespace oracle

#endif  // MAGMA_TESTS_ORACLE_VALUES_HPP
