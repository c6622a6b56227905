#pragma once

#include <optional>
#include <vector>

#include "liftlim/tower.hpp"

namespace liftlim {

// Batch evaluation over independent inputs. Each kernel has a serial reference with identical
// output; the parallel versions use OpenMP when available. An exception thrown for some input is
// rethrown after the loop, the one with the lowest input index winning.

/// w ∈ H for every word.
std::vector<bool> batch_member(const StageGroup& g, const Subgroup& h, const std::vector<Word>& words);
std::vector<bool> batch_member_serial(const StageGroup& g, const Subgroup& h, const std::vector<Word>& words);

/// π1 descriptor membership for every word.
std::vector<Pi1Result> batch_pi1(const Tower& t, const BaseModel& m, const std::vector<Word>& words,
                                 std::size_t horizon);
std::vector<Pi1Result> batch_pi1_serial(const Tower& t, const BaseModel& m, const std::vector<Word>& words,
                                        std::size_t horizon);

/// [π1(X_i) : G_i] for stages 0 .. stages_up_to(horizon) - 1; nullopt for infinite index.
std::vector<std::optional<Integer>> stage_indices(const Tower& t, std::size_t horizon);
std::vector<std::optional<Integer>> stage_indices_serial(const Tower& t, std::size_t horizon);

}  // namespace liftlim
