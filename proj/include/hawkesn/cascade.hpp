#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hawkesn {

/// An observed diffusion: event times relative to the first event, with
/// optional per-event marks (user influence). Immutable after construction.
struct Cascade {
    std::vector<double> times;   // non-decreasing; times[0] == 0 for loaded/normalized cascades
    std::vector<double> marks;   // empty in unmarked mode, else same length as times, every mark >= 1
    double t0_offset = 0.0;      // raw time of the first event before normalization

    [[nodiscard]] bool has_marks() const noexcept { return !marks.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] bool empty() const noexcept { return times.empty(); }
    [[nodiscard]] double duration() const { return times.back() - times.front(); }
    [[nodiscard]] bool has_ties() const noexcept;

    /// Throws std::invalid_argument on empty/unsorted/negative times or marks < 1.
    void validate(bool require_normalized = true) const;
};

/// Parameters of the finite-population self-exciting process.
/// n_pop is real-valued (relaxed during optimization); +infinity selects the
/// plain Hawkes limit. eta/alpha configure the marked kernel m^eta with marks
/// drawn from a power law of exponent alpha.
struct HawkesNParams {
    double mu = 0.0;
    double kappa = 1.0;
    double theta = 1.0;
    double n_pop = 1.0;
    std::optional<double> eta;   // marked mode iff set; requires 0 < eta < alpha - 1
    double alpha = 2.016;

    [[nodiscard]] bool marked() const noexcept { return eta.has_value(); }
    [[nodiscard]] bool infinite_pop() const noexcept;
    void validate() const;
};

/// SIR rates and initial conditions. n_pop is real-valued so fitted values
/// can be reported before rounding.
struct SirParams {
    double beta = 1.0;
    double gamma = 1.0;
    double n_pop = 1.0;
    int i0 = 1;

    void validate() const;
};

enum class SirEventKind { Infection, Recovery };

struct SirEvent {
    double time;
    SirEventKind kind;
};

/// A stochastic-SIR sample path: the interleaved infection/recovery event
/// sequence (seeds at t=0 are initial conditions, not events) plus the
/// generation context needed to reconstruct the state walk.
struct SirRealization {
    std::vector<SirEvent> events;   // sorted by time
    int i0 = 1;
    std::optional<double> n_pop;    // known when simulated, absent for loaded files

    [[nodiscard]] std::vector<double> infection_times() const;
    [[nodiscard]] std::vector<double> recovery_times() const;
    [[nodiscard]] std::size_t infection_count() const;

    /// Infection events prefixed by i0 seed events at t=0: the HawkesN-side view.
    [[nodiscard]] Cascade as_cascade() const;

    /// Throws std::invalid_argument when the implied infected count goes
    /// negative or the infection count exceeds n_pop - i0.
    void validate() const;
};

/// Reads the cascade CSV (header `time[,magnitude]`), normalizes times so the
/// first event sits at 0 and keeps the raw offset. Throws std::runtime_error
/// on parse errors, std::invalid_argument on ordering/domain violations.
[[nodiscard]] Cascade load_cascade(const std::string& path, bool has_marks);

[[nodiscard]] Cascade parse_cascade_csv(const std::string& text, bool has_marks);

void save_cascade(const Cascade& c, const std::string& path);
[[nodiscard]] std::string cascade_to_csv(const Cascade& c);

struct CascadeSplit {
    Cascade observed;   // first ceil(fraction * n) events, normalized clock
    Cascade holdout;    // remaining events on the original clock
};

/// Prefix split for holdout evaluation; fraction in (0, 1], ceil rule keeps at
/// least one observed event. Throws on empty cascade or fraction out of range.
[[nodiscard]] CascadeSplit split_cascade(const Cascade& c, double fraction);

[[nodiscard]] SirRealization load_sir_realization(const std::string& path, int i0,
                                                  std::optional<double> n_pop = std::nullopt);
[[nodiscard]] SirRealization parse_sir_realization_csv(const std::string& text, int i0,
                                                       std::optional<double> n_pop = std::nullopt);
void save_sir_realization(const SirRealization& r, const std::string& path);
[[nodiscard]] std::string sir_realization_to_csv(const SirRealization& r);

}  // namespace hawkesn
