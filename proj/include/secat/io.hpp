// Line-oriented text formats for the objects the command line works with:
// chain complexes, chain maps, graded rings with homomorphisms, stage
// certificates and fact files for the bounds engine. Every format starts
// with a "<kind> 1" header line, accepts '#' comments and blank lines, and
// writes rationals as p/q.
//
// Errors are split by nature, because callers map them to different exit
// codes: ParseError is a syntax or naming problem, InvalidComplexError and
// InvalidRingError flag data that parses but violates the defining laws,
// and CertificateDataError flags certificate content whose maps or
// witnesses fail their own typing checks. The last one is a mathematical
// rejection, not an input error.
#pragma once

#include "secat/bounds.hpp"
#include "secat/certificates.hpp"
#include "secat/chain.hpp"
#include "secat/chain_backend.hpp"
#include "secat/ring.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace secat {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public IoError {
public:
    using IoError::IoError;
};

class InvalidComplexError : public IoError {
public:
    using IoError::IoError;
};

class InvalidRingError : public IoError {
public:
    using IoError::IoError;
};

class CertificateDataError : public IoError {
public:
    using IoError::IoError;
};

// ---------------------------------------------------------------- chain ---
//
//   chain 1
//   complex NAME
//   degree N DIM
//   d N I J COEFF          entry (I, J) of d_N : C_N -> C_{N-1}
//   end

struct ChainFile {
    std::vector<std::pair<std::string, ChainComplex>> complexes;

    const ChainComplex* find(const std::string& name) const;
};

ChainFile parse_chain_file(std::istream& in, const std::string& what);
ChainFile load_chain_file(const std::string& path);
void write_chain_file(std::ostream& out, const ChainFile& file);

// ------------------------------------------------------------- chainmap ---
//
// Complex blocks as above, plus
//
//   map NAME SRC TGT
//   entry N I J COEFF      entry (I, J) of the degree-N component
//   end

struct ChainMapFile {
    struct MapBlock {
        std::string name, src, tgt;
        GradedMap map;
    };

    std::vector<std::pair<std::string, ChainComplex>> complexes;
    std::vector<MapBlock> maps;

    const ChainComplex* find(const std::string& name) const;
    const MapBlock* find_map(const std::string& name) const;
};

ChainMapFile parse_chainmap_file(std::istream& in, const std::string& what);
ChainMapFile load_chainmap_file(const std::string& path);
void write_chainmap_file(std::ostream& out, const ChainMapFile& file);

// ----------------------------------------------------------------- ring ---
//
//   ring 1
//   ring NAME
//   basis LABEL DEG
//   unit LABEL
//   product A B C COEFF    adds COEFF * C to the product A * B
//   end
//   ring NAME = product R1 R2
//   hom NAME SRC TGT
//   send A B COEFF         adds COEFF * B to the image of A
//   end
//
// Products with the unit are filled in automatically, and a product line
// for (A, B) fixes (B, A) by the sign rule unless the file sets it itself.

struct RingFile {
    struct HomBlock {
        std::string name, src, tgt;
        RingHom hom;
    };

    std::vector<std::string> order;  // ring names in declaration order
    std::map<std::string, std::shared_ptr<GradedRing>> rings;
    std::vector<HomBlock> homs;

    const GradedRing* find(const std::string& name) const;
    const HomBlock* find_hom(const std::string& name) const;
};

RingFile parse_ring_file(std::istream& in, const std::string& what);
RingFile load_ring_file(const std::string& path);

// ---------------------------------------------------------------- facts ---
//
//   facts 1
//   object LABEL [key=value ...]
//   map LABEL SRC TGT [key=value ...]
//   fact INV(LABEL) = [LO, HI] source=TAG
//   query INV(LABEL)
//
// Attribute keys: equivalence, section. Relation keys: cofibre_of=q,
// fibre_of=f, suspension_of=x, product_of=a,b,..., diagonal_of=x:k,
// ganea_alpha_of=i:k, ganea_beta_of=i:k, dominated_by=f:simple|relative,
// pushout_of=f:g, pullback_of=i:g, factors_through=chi[:via],
// cone_of=i[:sectioned]. HI may be inf.

struct FactsFile {
    struct FactLine {
        std::string entity;
        Inv inv = Inv::secat;
        Interval iv;
        std::string source;
    };

    std::vector<Entity> entities;
    std::vector<FactLine> facts;
    std::vector<std::pair<std::string, Inv>> queries;

    // Declares every entity and asserts every fact, in file order. Declare
    // and assert errors surface unchanged.
    void install(BoundsDb& db) const;
};

FactsFile parse_facts_file(std::istream& in, const std::string& what);
FactsFile load_facts_file(const std::string& path);

// ---------------------------------------------------------- certificate ---
//
//   certificate 1
//   kind relcat|pushcat
//   complex NAME ... end
//   map NAME SRC TGT ... end
//   witness NAME LHS RHS
//   entry N I J COEFF
//   end
//   base OBJ
//   stage OBJ              repeated, X_0 .. X_n in tower order
//   iota MAP               repeated, iota_0 .. iota_n
//   lambda MAP
//   lambda_left WIT
//   lambda_right WIT
//   target MAP             the map the certificate is about
//   step Z RHO TAU CHI GLUE COH [SIGMA RHO_SIGMA TAU_SIGMA]
//
// Loading replays the content into a fresh backend, so every map is
// re-checked to be a chain map and every witness re-checked against its
// endpoints; failures of those checks raise CertificateDataError.

struct CertificateFile {
    std::string kind;  // "relcat" or "pushcat"
    std::unique_ptr<ChainBackend> backend;
    RelcatCertificate cert;
    MapRef target;
};

CertificateFile parse_certificate_file(std::istream& in, const std::string& what);
CertificateFile load_certificate_file(const std::string& path);

// Serializes the full backend content followed by the certificate
// structure. Objects, maps and witnesses are named o0.., m0.., w0.. by
// store index, so a round trip reproduces the same refs.
void write_certificate_file(std::ostream& out, const ChainBackend& bk,
                            const RelcatCertificate& cert, MapRef target,
                            const std::string& kind);

}  // namespace secat
