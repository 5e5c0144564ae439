#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "disgan/classifier.hpp"
#include "disgan/gan.hpp"

namespace disgan {

// Versioned plain-text model files:
//
//   disgan-model 1
//   kind classifier | gan-bundle
//   <header key/value lines>
//   net <label> <layers> <w0> ... <wL> <act0> ... <act(L-1)>
//   param <label> <name> <frozen> <rows> <cols> <v0> <v1> ...
//   end
//
// Values use 17 significant digits, so a load reproduces every weight and
// therefore every score bit for bit.

inline constexpr int kModelFormatVersion = 1;

std::string serialize_classifier(const ClassifierNet& net);
ClassifierNet parse_classifier(const std::string& text);
void save_classifier(const ClassifierNet& net, const std::filesystem::path& path);
ClassifierNet load_classifier(const std::filesystem::path& path);

/// The auxiliary classifier is not embedded; it is stored in its own file.
std::string serialize_bundle(const GanBundle& bundle);
GanBundle parse_bundle(const std::string& text, std::shared_ptr<const AuxiliaryClassifier> aux);
void save_bundle(const GanBundle& bundle, const std::filesystem::path& path);
GanBundle load_bundle(const std::filesystem::path& path, std::shared_ptr<const AuxiliaryClassifier> aux);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace disgan
