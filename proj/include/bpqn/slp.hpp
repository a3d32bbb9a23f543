#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bpqn/circuit.hpp"

namespace bpqn {

// SLP text format, one item per line, ASCII, LF newlines, no blanks:
//   bpqn-slp 1
//   input x{...}                 (input order)
//   gate t<k> = <ref> + <ref>    (k counts from 0; <ref> is x{...} or t<j>, j < k)
//   output y{...} = <ref>        (output order)
inline std::string serialize_slp(const Circuit& c) {
    std::string out = "bpqn-slp 1\n";
    for (const Subset& label : c.input_labels()) out += "input x" + label.to_string() + "\n";
    for (std::size_t j = 0; j < c.gate_count(); ++j) {
        const Gate& g = c.gates()[j];
        out += "gate t" + std::to_string(j) + " = " + g.left.to_string(c.input_labels()) + " + " +
               g.right.to_string(c.input_labels()) + "\n";
    }
    for (const OutputAssignment& o : c.outputs())
        out += "output y" + o.label.to_string() + " = " + o.node.to_string(c.input_labels()) + "\n";
    return out;
}

namespace detail {

inline Subset parse_labeled_subset(int line, std::string_view token, char prefix) {
    if (token.size() < 3 || token[0] != prefix)
        throw parse_error(line, std::string("expected ") + prefix + "{...}, got '" + std::string(token) + "'");
    try {
        return Subset::parse(token.substr(1));
    } catch (const contract_violation& e) {
        throw parse_error(line, e.what());
    }
}

inline NodeRef parse_ref(int line, std::string_view token,
                         const std::unordered_map<std::uint64_t, std::size_t>& input_index,
                         std::size_t gates_so_far) {
    if (token.empty()) throw parse_error(line, "empty node reference");
    if (token[0] == 'x') {
        Subset label = parse_labeled_subset(line, token, 'x');
        auto it = input_index.find(label.mask());
        if (it == input_index.end())
            throw parse_error(line, "reference to undeclared input x" + label.to_string());
        return NodeRef::input(it->second);
    }
    if (token[0] == 't') {
        std::string_view digits = token.substr(1);
        if (digits.empty() || (digits.size() > 1 && digits[0] == '0'))
            throw parse_error(line, "malformed gate reference '" + std::string(token) + "'");
        std::size_t value = 0;
        for (char ch : digits) {
            if (ch < '0' || ch > '9')
                throw parse_error(line, "malformed gate reference '" + std::string(token) + "'");
            value = value * 10 + static_cast<std::size_t>(ch - '0');
        }
        if (value >= gates_so_far)
            throw parse_error(line, "reference to t" + std::to_string(value) + " before its definition");
        return NodeRef::gate(value);
    }
    throw parse_error(line, "expected x{...} or t<j>, got '" + std::string(token) + "'");
}

}  // namespace detail

// Strict inverse of serialize_slp: serialize(parse(serialize(c))) is
// byte-identical to serialize(c). Reports line number and reason for
// malformed refs, forward references and duplicate labels.
inline Circuit parse_slp(std::string_view text) {
    std::vector<std::string_view> lines;
    {
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) {
                lines.push_back(text.substr(start));
                break;
            }
            lines.push_back(text.substr(start, end - start));
            start = end + 1;
        }
    }
    if (lines.empty() || lines[0] != "bpqn-slp 1")
        throw parse_error(1, "expected header 'bpqn-slp 1'");

    Circuit c;
    std::unordered_map<std::uint64_t, std::size_t> input_index;
    std::unordered_set<std::uint64_t> output_labels;
    enum class Section { inputs, gates, outputs };
    Section section = Section::inputs;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const int line = static_cast<int>(li) + 1;
        std::string_view s = lines[li];
        if (s.empty()) throw parse_error(line, "blank line");

        if (s.starts_with("input ")) {
            if (section != Section::inputs) throw parse_error(line, "input line after gates or outputs");
            Subset label = detail::parse_labeled_subset(line, s.substr(6), 'x');
            if (input_index.contains(label.mask()))
                throw parse_error(line, "duplicate input x" + label.to_string());
            input_index.emplace(label.mask(), c.input_count());
            c.add_input(label);
        } else if (s.starts_with("gate ")) {
            if (section == Section::outputs) throw parse_error(line, "gate line after outputs");
            section = Section::gates;
            std::string_view rest = s.substr(5);
            const std::string expected_name = "t" + std::to_string(c.gate_count());
            if (!rest.starts_with(expected_name + " = "))
                throw parse_error(line, "expected 'gate " + expected_name + " = <ref> + <ref>'");
            rest.remove_prefix(expected_name.size() + 3);
            std::size_t plus = rest.find(" + ");
            if (plus == std::string_view::npos) throw parse_error(line, "expected '<ref> + <ref>'");
            NodeRef left = detail::parse_ref(line, rest.substr(0, plus), input_index, c.gate_count());
            NodeRef right = detail::parse_ref(line, rest.substr(plus + 3), input_index, c.gate_count());
            c.add_gate(left, right);
        } else if (s.starts_with("output ")) {
            section = Section::outputs;
            std::string_view rest = s.substr(7);
            std::size_t eq = rest.find(" = ");
            if (eq == std::string_view::npos) throw parse_error(line, "expected 'output y{...} = <ref>'");
            Subset label = detail::parse_labeled_subset(line, rest.substr(0, eq), 'y');
            if (!output_labels.insert(label.mask()).second)
                throw parse_error(line, "duplicate output y" + label.to_string());
            NodeRef node = detail::parse_ref(line, rest.substr(eq + 3), input_index, c.gate_count());
            c.add_output(label, node);
        } else {
            throw parse_error(line, "unrecognized line '" + std::string(s) + "'");
        }
    }
    return c;
}

// Graphviz rendering: inputs as boxes, gates as circles, outputs as double
// circles, one edge per gate operand and per output assignment.
inline std::string export_dot(const Circuit& c) {
    std::string out = "digraph bpqn {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < c.input_count(); ++i)
        out += "  x" + std::to_string(i) + " [shape=box,label=\"x" + c.input_labels()[i].to_string() +
               "\"];\n";
    for (std::size_t j = 0; j < c.gate_count(); ++j)
        out += "  t" + std::to_string(j) + " [shape=circle,label=\"t" + std::to_string(j) + "\"];\n";
    for (std::size_t k = 0; k < c.output_count(); ++k)
        out += "  y" + std::to_string(k) + " [shape=doublecircle,label=\"y" +
               c.outputs()[k].label.to_string() + "\"];\n";
    auto node_id = [](NodeRef r) {
        return (r.is_input() ? "x" : "t") + std::to_string(r.index);
    };
    for (std::size_t j = 0; j < c.gate_count(); ++j) {
        const Gate& g = c.gates()[j];
        out += "  " + node_id(g.left) + " -> t" + std::to_string(j) + ";\n";
        out += "  " + node_id(g.right) + " -> t" + std::to_string(j) + ";\n";
    }
    for (std::size_t k = 0; k < c.output_count(); ++k)
        out += "  " + node_id(c.outputs()[k].node) + " -> y" + std::to_string(k) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace bpqn
