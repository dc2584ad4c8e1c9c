#ifndef TFE_OUTPUT_HPP
#define TFE_OUTPUT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tfe {

inline constexpr const char* kVersion = "0.1.0";

// Decimal text with 17 significant digits (round-trips doubles exactly).
std::string format_full(double v);

// Minimal CSV emitter: '#'-prefixed comment lines, one header row, numeric
// rows at full precision.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& line);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);

private:
  std::ostream& os_;
};

}  // namespace tfe

#endif
