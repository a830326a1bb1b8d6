#pragma once
// Prompt templates for the remote planner. Bump kPromptVersion whenever a
// template changes; it is sent along with every request and recorded in traces.
//
// Placeholders are {{name}}; the remote planner fills schema, question, step,
// prior, evidence and last_error.

namespace wkg::agent::prompts {

inline constexpr const char* kPromptVersion = "wkg-prompts/1";

inline constexpr const char* kSystem =
    "You assist with analytics over a warehouse knowledge graph built from a discrete-event simulation of "
    "inbound logistics. Suppliers' trucks are unloaded by workers, packages are carried to AGVs, AGVs drive "
    "them to forklifts, forklifts place them in storage blocks. Always reply with a single JSON object and "
    "nothing else.";

inline constexpr const char* kDialect =
    "Query dialect (a Cypher subset):\n"
    "  MATCH pattern[, pattern] [WHERE expr]\n"
    "  WITH ... [WHERE ...], UNWIND list AS x, CALL { [WITH vars] ... RETURN ... }\n"
    "  RETURN [DISTINCT] expr [AS name], ... [ORDER BY expr [ASC|DESC], ...] [LIMIT n]\n"
    "  A pattern spans at most two relationships.\n"
    "  Node patterns (v:LABEL {key: 'value'}); relationships -[r:TYPE]-> or <-[r:TYPE]-.\n"
    "  Aggregates: count, sum, avg, min, max, collect (DISTINCT allowed).\n"
    "  Functions: duration_seconds(a, b), toFloat, toInteger, abs, round(x[, digits]), coalesce.\n"
    "  CASE WHEN ... THEN ... [ELSE ...] END; IS NULL; IN; AND/OR/NOT/XOR.\n";

inline constexpr const char* kShapes =
    "Answer shapes (expected_output):\n"
    "  record:c1,c2          exactly one result row with columns c1, c2\n"
    "  map:key:v             one row per key, value column v\n"
    "  map:key:v1,v2         one row per key, value columns v1 and v2\n"
    "  rows:name:c1,c2       a list of rows with columns c1, c2\n";

inline constexpr const char* kClassify =
    "Classify the question.\n"
    "operational: answered by one lookup or aggregation over the graph.\n"
    "investigative: asks why something happened or what causes a delay.\n"
    "Question: {{question}}\n"
    "Reply as {\"class\": \"operational\"} or {\"class\": \"investigative\"}.";

inline constexpr const char* kPlan =
    "{{schema}}\n{{shapes}}\n"
    "Break the question into the smallest number of query steps that answer it.\n"
    "Question: {{question}}\n"
    "Reply as {\"steps\": [{\"intent\": \"...\", \"required_entities\": [\"supplier=...\"], "
    "\"expected_output\": \"record:...\"}]}.";

inline constexpr const char* kQuery =
    "{{schema}}\n{{dialect}}\n"
    "Question: {{question}}\n"
    "Step {{step_index}}: {{intent}}\n"
    "Entities: {{entities}}\n"
    "The result must have the shape {{expected_output}}.\n"
    "Results of earlier steps:\n{{prior}}\n"
    "{{last_error}}"
    "Reply as {\"query\": \"...\"}.";

inline constexpr const char* kLastError =
    "Your previous query failed with this error; correct it:\n{{error}}\n";

inline constexpr const char* kNext =
    "{{schema}}\n"
    "Main question: {{question}}\n"
    "Evidence gathered so far:\n{{evidence}}\n"
    "If the evidence shows which process stage is the bottleneck, reply "
    "{\"sufficient\": true, \"summary\": \"...\"}. Otherwise ask one more focused sub-question: "
    "{\"sufficient\": false, \"sub_question\": \"...\"}.";

inline constexpr const char* kSummarize =
    "Question: {{question}}\n"
    "Query results:\n{{results}}\n"
    "Answer the question in two or three sentences using only these results. Reply as {\"summary\": \"...\"}.";

inline constexpr const char* kReformat =
    "That reply could not be used ({{error}}). Reply again with only the JSON object in the requested form.";

}  // namespace wkg::agent::prompts
