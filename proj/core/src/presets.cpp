#include "toeplitz/presets.hpp"

#include "toeplitz/errors.hpp"

namespace toeplitz {

std::vector<std::string> preset_names() { return {"threeadic", "threeadic-centered", "irregular-demo"}; }

TowerConfig preset_config(const std::string& name) {
  TowerConfig c;
  if (name == "threeadic" || name == "threeadic-centered") {
    c = line_config(std::vector<std::int64_t>(12, 3),
                    name == "threeadic" ? DomainStyle::NonNegative : DomainStyle::Centered);
    c.tail.kind = TailSpec::Kind::Repeat;
  } else if (name == "irregular-demo") {
    c = line_config({15, 31, 63, 127, 255, 511}, DomainStyle::Centered);
    c.tail.kind = TailSpec::Kind::Geometric;
    c.tail.ratio = Rational(1, 2);
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  c.name = name;
  return c;
}

std::size_t preset_default_depth(const std::string& name) {
  if (name == "irregular-demo") return 4;
  preset_config(name);
  return 5;
}

}  // namespace toeplitz
