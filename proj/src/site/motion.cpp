#include "sedvel/site/motion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sedvel/errors.hpp"
#include "sedvel/io/csv.hpp"

namespace sedvel::site {

void MotionRecord::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("motion dt must be positive");
  if (units != "g" && units != "m/s2") throw DomainError("motion units must be 'g' or 'm/s2'");
  if (acc.size() < 256) throw DomainError("motion needs at least 256 samples");
  for (double a : acc)
    if (!std::isfinite(a)) throw DomainError("motion samples must be finite");
}

double MotionRecord::to_si() const { return units == "g" ? kGravity : 1.0; }

MotionRecord parse_motion(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0)
    throw DataError(source + ": missing '# label=... units=... dt=...' header");
  MotionRecord m;
  bool have_dt = false;
  std::istringstream hdr(line.substr(1));
  for (std::string tok; hdr >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw DataError(source + ": malformed header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "label") m.label = value;
    else if (key == "units") m.units = value;
    else if (key == "dt") {
      m.dt = io::parse_double(value, source + ": dt");
      have_dt = true;
    } else throw DataError(source + ": unknown header key '" + key + "'");
  }
  if (!have_dt) throw DataError(source + ": header lacks dt");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError(source + ":" + std::to_string(lineno) + ": expected t,acc");
    m.acc.push_back(io::parse_double(std::string_view(line).substr(comma + 1),
                                     source + ":" + std::to_string(lineno)));
  }
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw DataError(source + ": " + e.what());
  }
  return m;
}

MotionRecord read_motion(const std::filesystem::path& path) {
  return parse_motion(io::read_text(path), path.string());
}

std::string format_motion(const MotionRecord& m) {
  std::ostringstream os;
  os << "# label=" << (m.label.empty() ? "motion" : m.label) << " units=" << m.units
     << " dt=" << io::fmt_exact(m.dt) << '\n';
  for (std::size_t i = 0; i < m.acc.size(); ++i)
    os << io::fmt6(static_cast<double>(i) * m.dt) << ',' << io::fmt_exact(m.acc[i]) << '\n';
  return os.str();
}

void write_motion(const MotionRecord& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_motion(m);
}

}  // namespace sedvel::site
