#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "biogeo/error.hpp"
#include "biogeo/raster.hpp"
#include "biogeo/raster_io.hpp"

namespace biogeo {

// r x r agreement counts. Rows are classifier output, columns reference.
class ErrorMatrix {
public:
    using Count = std::uint64_t;

    ErrorMatrix() = default;

    explicit ErrorMatrix(std::vector<std::string> classes)
        : classes_(std::move(classes)), counts_(classes_.size() * classes_.size(), 0) {
        std::set<std::string> seen(classes_.begin(), classes_.end());
        if (seen.size() != classes_.size())
            throw Error("error matrix classes must be unique");
    }

    ErrorMatrix(std::vector<std::string> classes, const std::vector<std::vector<Count>>& rows)
        : ErrorMatrix(std::move(classes)) {
        if (rows.size() != size())
            throw Error("error matrix must be square");
        for (std::size_t i = 0; i < size(); ++i) {
            if (rows[i].size() != size())
                throw Error("error matrix must be square");
            for (std::size_t j = 0; j < size(); ++j)
                at(i, j) = rows[i][j];
        }
    }

    std::size_t size() const noexcept { return classes_.size(); }
    const std::vector<std::string>& classes() const noexcept { return classes_; }

    Count& at(std::size_t predicted, std::size_t reference) { return counts_.at(predicted * size() + reference); }
    Count at(std::size_t predicted, std::size_t reference) const { return counts_.at(predicted * size() + reference); }

    Count row_total(std::size_t i) const {
        Count t = 0;
        for (std::size_t j = 0; j < size(); ++j)
            t += at(i, j);
        return t;
    }

    Count column_total(std::size_t j) const {
        Count t = 0;
        for (std::size_t i = 0; i < size(); ++i)
            t += at(i, j);
        return t;
    }

    Count trace() const {
        Count t = 0;
        for (std::size_t i = 0; i < size(); ++i)
            t += at(i, i);
        return t;
    }

    Count total() const {
        Count t = 0;
        for (Count c : counts_)
            t += c;
        return t;
    }

    Count excluded_unclassified = 0;

    friend bool operator==(const ErrorMatrix&, const ErrorMatrix&) = default;

private:
    std::vector<std::string> classes_;
    std::vector<Count> counts_;
};

// Cross-tabulates two label maps by class name. Unclassified predictions are
// counted in excluded_unclassified rather than in the matrix.
inline ErrorMatrix build_matrix(const LabelMap& predicted, const LabelMap& reference,
                                std::span<const std::string> classes) {
    if (predicted.width() != reference.width() || predicted.height() != reference.height())
        throw Error("predicted map is " + std::to_string(predicted.width()) + "x" + std::to_string(predicted.height()) +
                    ", reference is " + std::to_string(reference.width()) + "x" + std::to_string(reference.height()));
    ErrorMatrix m(std::vector<std::string>(classes.begin(), classes.end()));
    auto index_map = [&](const LabelMap& map, const char* which) {
        std::vector<std::size_t> idx;
        for (const auto& name : map.class_names()) {
            auto it = std::find(classes.begin(), classes.end(), name);
            if (it == classes.end())
                throw Error(std::string(which) + " map has unknown class '" + name + "'");
            idx.push_back(static_cast<std::size_t>(it - classes.begin()));
        }
        return idx;
    };
    const auto pred_idx = index_map(predicted, "predicted");
    const auto ref_idx = index_map(reference, "reference");
    for (PixelIndex p = 0; p < predicted.pixel_count(); ++p) {
        const auto r = reference.at(p);
        if (r == LabelMap::kUnclassified)
            throw Error("reference map contains unclassified pixels");
        const auto l = predicted.at(p);
        if (l == LabelMap::kUnclassified) {
            ++m.excluded_unclassified;
            continue;
        }
        ++m.at(pred_idx[static_cast<std::size_t>(l)], ref_idx[static_cast<std::size_t>(r)]);
    }
    return m;
}

// Union of both maps' class names, reference order first.
inline std::vector<std::string> merged_classes(const LabelMap& predicted, const LabelMap& reference) {
    std::vector<std::string> out = reference.class_names();
    for (const auto& n : predicted.class_names())
        if (std::find(out.begin(), out.end(), n) == out.end())
            out.push_back(n);
    return out;
}

// k = (N * sum x_ii - sum x_i+ x_+i) / (N^2 - sum x_i+ x_+i), in integers up
// to the final division.
inline double kappa(const ErrorMatrix& m) {
    const __int128 n = m.total();
    if (n == 0)
        throw Error("kappa of an empty error matrix is undefined");
    __int128 chance = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        chance += __int128{m.row_total(i)} * m.column_total(i);
    const __int128 numerator = n * m.trace() - chance;
    const __int128 denominator = n * n - chance;
    if (denominator == 0)
        throw UndefinedKappa("kappa undefined: chance agreement equals N^2");
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

inline double overall_accuracy(const ErrorMatrix& m) {
    const auto n = m.total();
    if (n == 0)
        throw Error("overall accuracy of an empty error matrix is undefined");
    return static_cast<double>(m.trace()) / static_cast<double>(n);
}

// Producer accuracy is column-wise (x_ii / x_+i), user accuracy row-wise
// (x_ii / x_i+). Empty totals leave the entry unset.
struct ClassAccuracy {
    std::string label;
    std::optional<double> producer;
    std::optional<double> user;
};

inline std::vector<ClassAccuracy> producer_user_accuracy(const ErrorMatrix& m) {
    std::vector<ClassAccuracy> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        ClassAccuracy a{m.classes()[i], std::nullopt, std::nullopt};
        const double diag = static_cast<double>(m.at(i, i));
        if (const auto col = m.column_total(i))
            a.producer = diag / static_cast<double>(col);
        if (const auto row = m.row_total(i))
            a.user = diag / static_cast<double>(row);
        out.push_back(std::move(a));
    }
    return out;
}

// Matrix CSV: header `,<class>,...`, then one `<predicted class>,<counts>`
// row per class in header order.
inline void write_matrix_csv(std::ostream& out, const ErrorMatrix& m) {
    for (const auto& c : m.classes())
        out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.classes()[i];
        for (std::size_t j = 0; j < m.size(); ++j)
            out << ',' << m.at(i, j);
        out << '\n';
    }
}

inline void write_matrix_csv(const std::string& path, const ErrorMatrix& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    write_matrix_csv(out, m);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

inline ErrorMatrix read_matrix_csv(std::istream& in, const std::string& source = "<matrix>") {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(source, 1, "missing header");
    auto header = detail::split_csv(line);
    if (header.size() < 2)
        throw ParseError(source, 1, "header must name at least one class");
    std::vector<std::string> classes(header.begin() + 1, header.end());
    std::vector<std::vector<ErrorMatrix::Count>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty())
            continue;
        const auto cells = detail::split_csv(line);
        const std::size_t r = rows.size();
        if (r >= classes.size())
            throw ParseError(source, line_no, "more rows than classes");
        if (cells.size() != classes.size() + 1)
            throw ParseError(source, line_no, "expected " + std::to_string(classes.size() + 1) + " cells");
        if (cells[0] != classes[r])
            throw ParseError(source, line_no, "row '" + cells[0] + "' out of order, expected '" + classes[r] + "'");
        std::vector<ErrorMatrix::Count> row;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            ErrorMatrix::Count c = 0;
            if (!detail::parse_int(cells[j], c))
                throw ParseError(source, line_no, "'" + cells[j] + "' is not a count");
            row.push_back(c);
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() != classes.size())
        throw ParseError(source, line_no, "expected " + std::to_string(classes.size()) + " rows");
    try {
        return ErrorMatrix(std::move(classes), rows);
    } catch (const Error& e) {
        throw ParseError(source, 1, e.what());
    }
}

inline ErrorMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open matrix '" + path + "'");
    return read_matrix_csv(in, path);
}

}  // namespace biogeo
