// Bundled copies of the data/ files. Regenerate with
// tools/embed_data.sh after editing anything under data/.

#include "dockrule/builtin_data.hpp"

namespace dockrule::builtin {

namespace {

const char* const kAbstractions = R"DOCKDATA(# Literal categories appended as child nodes during abstraction.
# Format: KIND REGEX (search semantics), applied in this order.
ABS-URL-HTTPS ^https://
ABS-URL-HTTP ^http://
ABS-URL (https?|ftp)://
ABS-PATH-REL ^(\.)+/
ABS-PATH-ABS ^/
ABS-APT-LISTS ^/var/lib/apt/lists
ABS-USR-SRC ^/usr/src
ABS-VAR-CACHE-YUM ^/var/cache/yum
ABS-EXTENSION-ASC \.asc$
ABS-EXTENSION-TAR \.(tar|tgz|tar\.[a-z0-9]+)$
ABS-SINGLE-SPACE ^[^ ]+ [^ ]+$
ABS-GLOB [*?]
ABS-HA-POOLS ha\.pools\.
)DOCKDATA";

const char* const kGoldRules = R"DOCKDATA(# Curated Dockerfile best-practice rules. Each block reads
# "where an antecedent matches, the consequent must appear at the
# location" -- among the children filling the [*] slot (child-of), in
# earlier sibling commands (precedes), or in later ones (follows).

rule rmRecurisveAfterMktempD
location follows
scope intra
antecedent (MKTEMP (FLAG-DIRECTORY))
consequent (RM (RM-F-RECURSIVE))
reconstructed true

rule curlUseFlagF
location child-of
scope intra
antecedent (CURL [*])
consequent (FLAG-FAIL)
reconstructed true

rule tarSomethingRmTheSomething
location follows
scope intra
antecedent (TAR)
consequent (RM (RM-PATH (ABS-EXTENSION-TAR)))
reconstructed true

rule apkAddUseNoCache
location child-of
scope intra
antecedent (APK-ADD [*])
consequent (FLAG-NO-CACHE)

rule aptGetInstallUseNoRec
location child-of
scope intra
antecedent (APT-GET-INSTALL [*])
consequent (FLAG-NO-RECOMMENDS)

rule curlUseHttpsUrl
location child-of
scope intra
antecedent (SC-CURL-URL [*])
consequent (ABS-URL-HTTPS)
reconstructed true

rule gpgUseBatchFlag
location child-of
scope intra
antecedent (GPG [*])
consequent (FLAG-BATCH)
reconstructed true

rule sha256sumEchoOneSpace
location precedes
scope intra
antecedent (SHA256SUM (FLAG-CHECK))
consequent (SC-ECHO-ITEM (ABS-SINGLE-SPACE))
reconstructed true

rule gpgUseHaPools
location child-of
scope intra
antecedent (GPG (SC-GPG-KEYSERVER [*]))
consequent (ABS-HA-POOLS)
reconstructed true

rule configureUseBuildFlag
location child-of
scope intra
antecedent (CONFIGURE [*])
consequent (FLAG-BUILD)
reconstructed true

rule wgetUseHttpsUrl
location child-of
scope intra
antecedent (SC-WGET-URL [*])
consequent (ABS-URL-HTTPS)
reconstructed true

rule aptGetInstallRmAptLists
location follows
scope intra
antecedent (APT-GET-INSTALL)
consequent (RM (RM-F-RECURSIVE) (RM-PATH (ABS-APT-LISTS)))

rule aptGetInstallUseY
location child-of
scope intra
antecedent (APT-GET-INSTALL [*])
consequent (FLAG-YES)
reconstructed true

rule aptGetUpdatePrecedesInstall
location precedes
scope intra
antecedent (APT-GET-INSTALL)
consequent (APT-GET-UPDATE)

rule gpgVerifyAscRmAsc
location follows
scope intra
antecedent (GPG (FLAG-VERIFY))
consequent (RM (RM-PATH (ABS-EXTENSION-ASC)))
reconstructed true
)DOCKDATA";

const char* const kGoldRulesUnfiltered = R"DOCKDATA(# Full curated rule set before support and confidence thresholding,
# ordered by measured confidence ascending. The default set (gold-rules)
# is the subset passing support >= 50 and confidence >= 0.75.

rule pipUseCacheDir
location child-of
scope intra
antecedent (PIP-INSTALL [*])
consequent (FLAG-NO-CACHE-DIR)
reconstructed true

rule npmCacheCleanUseForce
location child-of
scope intra
antecedent (NPM-CACHE-CLEAN [*])
consequent (FLAG-FORCE)
reconstructed true

rule mkdirUsrSrcThenRemove
location follows
scope intra
antecedent (MKDIR (MKDIR-PATH (ABS-USR-SRC)))
consequent (RM (RM-PATH (ABS-USR-SRC)))
reconstructed true

rule rmRecurisveAfterMktempD
location follows
scope intra
antecedent (MKTEMP (FLAG-DIRECTORY))
consequent (RM (RM-F-RECURSIVE))
reconstructed true

rule curlUseFlagF
location child-of
scope intra
antecedent (CURL [*])
consequent (FLAG-FAIL)
reconstructed true

rule tarSomethingRmTheSomething
location follows
scope intra
antecedent (TAR)
consequent (RM (RM-PATH (ABS-EXTENSION-TAR)))
reconstructed true

rule apkAddUseNoCache
location child-of
scope intra
antecedent (APK-ADD [*])
consequent (FLAG-NO-CACHE)

rule aptGetInstallUseNoRec
location child-of
scope intra
antecedent (APT-GET-INSTALL [*])
consequent (FLAG-NO-RECOMMENDS)

rule curlUseHttpsUrl
location child-of
scope intra
antecedent (SC-CURL-URL [*])
consequent (ABS-URL-HTTPS)
reconstructed true

rule gpgUseBatchFlag
location child-of
scope intra
antecedent (GPG [*])
consequent (FLAG-BATCH)
reconstructed true

rule sha256sumEchoOneSpace
location precedes
scope intra
antecedent (SHA256SUM (FLAG-CHECK))
consequent (SC-ECHO-ITEM (ABS-SINGLE-SPACE))
reconstructed true

rule gpgUseHaPools
location child-of
scope intra
antecedent (GPG (SC-GPG-KEYSERVER [*]))
consequent (ABS-HA-POOLS)
reconstructed true

rule configureUseBuildFlag
location child-of
scope intra
antecedent (CONFIGURE [*])
consequent (FLAG-BUILD)
reconstructed true

rule wgetUseHttpsUrl
location child-of
scope intra
antecedent (SC-WGET-URL [*])
consequent (ABS-URL-HTTPS)
reconstructed true

rule aptGetInstallRmAptLists
location follows
scope intra
antecedent (APT-GET-INSTALL)
consequent (RM (RM-F-RECURSIVE) (RM-PATH (ABS-APT-LISTS)))

rule aptGetInstallUseY
location child-of
scope intra
antecedent (APT-GET-INSTALL [*])
consequent (FLAG-YES)
reconstructed true

rule aptGetUpdatePrecedesInstall
location precedes
scope intra
antecedent (APT-GET-INSTALL)
consequent (APT-GET-UPDATE)

rule gpgVerifyAscRmAsc
location follows
scope intra
antecedent (GPG (FLAG-VERIFY))
consequent (RM (RM-PATH (ABS-EXTENSION-ASC)))
reconstructed true

rule npmCacheCleanAfterInstall
location follows
scope intra
antecedent (NPM-INSTALL)
consequent (NPM-CACHE-CLEAN)
reconstructed true

rule gemUpdateSystemRmRootGem
location follows
scope intra
antecedent (GEM-UPDATE (FLAG-SYSTEM))
consequent (RM (RM-PATH (ABS-PATH-ABS)))
reconstructed true

rule gemUpdateNoDocument
location child-of
scope intra
antecedent (GEM-UPDATE [*])
consequent (FLAG-NO-DOCUMENT)
reconstructed true

rule yumInstallForceYes
location child-of
scope intra
antecedent (YUM-INSTALL [*])
consequent (FLAG-YES)
reconstructed true

rule yumInstallRmVarCacheYum
location follows
scope intra
antecedent (YUM-INSTALL)
consequent (RM (RM-PATH (ABS-VAR-CACHE-YUM)))
reconstructed true
)DOCKDATA";

const char* const kSchema_apk_add = R"DOCKDATA(command: apk add
root: APK-ADD
flag FLAG-NO-CACHE = --no-cache
flag FLAG-UPDATE = -U | --update-cache
opt SC-APK-VIRTUAL<SC-APK-VIRTUAL-VALUE> = -t | --virtual
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_apt_get_install = R"DOCKDATA(command: apt-get install
root: APT-GET-INSTALL
flag FLAG-YES = -y | --yes | --assume-yes
flag* FLAG-QUIET = -q | --quiet
flag FLAG-NO-RECOMMENDS = --no-install-recommends
flag FLAG-FIX-MISSING = --fix-missing
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_apt_get_update = R"DOCKDATA(command: apt-get update
root: APT-GET-UPDATE
flag FLAG-YES = -y | --yes | --assume-yes
flag* FLAG-QUIET = -q | --quiet
)DOCKDATA";

const char* const kSchema_configure = R"DOCKDATA(command: configure
root: CONFIGURE
opt FLAG-BUILD<FLAG-BUILD-VALUE> = --build
opt FLAG-HOST<FLAG-HOST-VALUE> = --host
opt FLAG-PREFIX<FLAG-PREFIX-VALUE> = --prefix
flag FLAG-DISABLE-STATIC = --disable-static
args SC-CONFIGURE-ARG *
)DOCKDATA";

const char* const kSchema_cp = R"DOCKDATA(command: cp
root: CP
flag CP-RECURSIVE = -r | -R | --recursive
flag CP-ARCHIVE = -a | --archive
flag CP-FORCE = -f | --force
args CP-PATH *
)DOCKDATA";

const char* const kSchema_curl = R"DOCKDATA(command: curl
root: CURL
flag FLAG-FAIL = -f | --fail
flag FLAG-SILENT = -s | --silent
flag FLAG-SHOW-ERROR = -S | --show-error
flag FLAG-LOCATION = -L | --location
opt SC-CURL-OUTPUT<SC-CURL-OUTPUT-VALUE> = -o | --output
args SC-CURL-URL *
)DOCKDATA";

const char* const kSchema_echo = R"DOCKDATA(command: echo
root: ECHO
flag FLAG-NO-NEWLINE = -n
flag FLAG-ESCAPES = -e
args SC-ECHO-ITEM *
)DOCKDATA";

const char* const kSchema_gem_install = R"DOCKDATA(command: gem install
root: GEM-INSTALL
flag FLAG-NO-DOCUMENT = --no-document | -N
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_gem_update = R"DOCKDATA(command: gem update
root: GEM-UPDATE
flag FLAG-SYSTEM = --system
flag FLAG-NO-DOCUMENT = --no-document | -N
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_gpg = R"DOCKDATA(command: gpg
root: GPG
flag FLAG-BATCH = --batch
flag FLAG-VERIFY = --verify
flag FLAG-NO-TTY = --no-tty
opt SC-GPG-KEYSERVER<SC-GPG-KEYSERVER-VALUE> = --keyserver
opt SC-GPG-RECV-KEYS<SC-GPG-RECV-KEYS-VALUE> = --recv-keys
args SC-GPG-ARG *
)DOCKDATA";

const char* const kSchema_ln = R"DOCKDATA(command: ln
root: LN
flag FLAG-SYMBOLIC = -s | --symbolic
flag FLAG-FORCE = -f | --force
args LN-PATH *
)DOCKDATA";

const char* const kSchema_make = R"DOCKDATA(command: make
root: MAKE
opt SC-MAKE-JOBS<SC-MAKE-JOBS-VALUE> = -j | --jobs
opt SC-MAKE-DIRECTORY<SC-MAKE-DIRECTORY-VALUE> = -C | --directory
args SC-MAKE-TARGET *
)DOCKDATA";

const char* const kSchema_mkdir = R"DOCKDATA(command: mkdir
root: MKDIR
flag FLAG-PARENTS = -p | --parents
opt SC-MKDIR-MODE<SC-MKDIR-MODE-VALUE> = -m | --mode
args MKDIR-PATH *
)DOCKDATA";

const char* const kSchema_mktemp = R"DOCKDATA(command: mktemp
root: MKTEMP
flag FLAG-DIRECTORY = -d | --directory
flag FLAG-QUIET = -q
args SC-MKTEMP-TEMPLATE *
)DOCKDATA";

const char* const kSchema_npm_cache_clean = R"DOCKDATA(command: npm cache clean
root: NPM-CACHE-CLEAN
flag FLAG-FORCE = -f | --force
)DOCKDATA";

const char* const kSchema_npm_install = R"DOCKDATA(command: npm install
root: NPM-INSTALL
flag FLAG-GLOBAL = -g | --global
flag FLAG-PRODUCTION = --production
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_pip_install = R"DOCKDATA(command: pip install
root: PIP-INSTALL
flag FLAG-NO-CACHE-DIR = --no-cache-dir
flag FLAG-UPGRADE = -U | --upgrade
opt SC-PIP-REQUIREMENT<SC-PIP-REQUIREMENT-VALUE> = -r | --requirement
args PACKAGES/PACKAGE *
)DOCKDATA";

const char* const kSchema_rm = R"DOCKDATA(command: rm
root: RM
flag RM-F-RECURSIVE = -rf | -fr | -Rf | -fR
flag RM-RECURSIVE = -r | -R | --recursive
flag RM-FORCE = -f | --force
args RM-PATH *
)DOCKDATA";

const char* const kSchema_sed = R"DOCKDATA(command: sed
root: SED
flag FLAG-IN-PLACE = -i | --in-place
flag FLAG-EXTENDED-REGEXP = -E | -r | --regexp-extended
opt SC-SED-EXPRESSION<SC-SED-EXPRESSION-VALUE> = -e | --expression
args SC-SED-ARG *
)DOCKDATA";

const char* const kSchema_sha256sum = R"DOCKDATA(command: sha256sum
root: SHA256SUM
flag FLAG-CHECK = -c | --check
args SC-SHA256SUM-ARG *
)DOCKDATA";

const char* const kSchema_tar = R"DOCKDATA(command: tar
root: TAR
flag TAR-EXTRACT = -x | --extract
flag TAR-CREATE = -c | --create
flag TAR-GZIP = -z | --gzip
flag TAR-BZIP2 = -j | --bzip2
flag TAR-XZ = -J | --xz
flag TAR-VERBOSE = -v | --verbose
opt SC-TAR-FILE<SC-TAR-FILE-VALUE> = -f | --file
opt SC-TAR-DIRECTORY<SC-TAR-DIRECTORY-VALUE> = -C | --directory
opt SC-TAR-STRIP<SC-TAR-STRIP-VALUE> = --strip-components
args SC-TAR-PATH *
)DOCKDATA";

const char* const kSchema_wget = R"DOCKDATA(command: wget
root: WGET
flag FLAG-QUIET = -q | --quiet
opt SC-WGET-OUTPUT<SC-WGET-OUTPUT-VALUE> = -O | --output-document
args SC-WGET-URL *
)DOCKDATA";

const char* const kSchema_yum_install = R"DOCKDATA(command: yum install
root: YUM-INSTALL
flag FLAG-YES = -y | --assumeyes
args PACKAGES/PACKAGE *
)DOCKDATA";

}  // namespace

const std::vector<NamedText>& schema_texts() {
    static const std::vector<NamedText> texts = {
        {"apk-add.schema", kSchema_apk_add},
        {"apt-get-install.schema", kSchema_apt_get_install},
        {"apt-get-update.schema", kSchema_apt_get_update},
        {"configure.schema", kSchema_configure},
        {"cp.schema", kSchema_cp},
        {"curl.schema", kSchema_curl},
        {"echo.schema", kSchema_echo},
        {"gem-install.schema", kSchema_gem_install},
        {"gem-update.schema", kSchema_gem_update},
        {"gpg.schema", kSchema_gpg},
        {"ln.schema", kSchema_ln},
        {"make.schema", kSchema_make},
        {"mkdir.schema", kSchema_mkdir},
        {"mktemp.schema", kSchema_mktemp},
        {"npm-cache-clean.schema", kSchema_npm_cache_clean},
        {"npm-install.schema", kSchema_npm_install},
        {"pip-install.schema", kSchema_pip_install},
        {"rm.schema", kSchema_rm},
        {"sed.schema", kSchema_sed},
        {"sha256sum.schema", kSchema_sha256sum},
        {"tar.schema", kSchema_tar},
        {"wget.schema", kSchema_wget},
        {"yum-install.schema", kSchema_yum_install},
    };
    return texts;
}

const std::string& abstractions_text() {
    static const std::string text = kAbstractions;
    return text;
}

const std::string& gold_rules_text() {
    static const std::string text = kGoldRules;
    return text;
}

const std::string& gold_rules_unfiltered_text() {
    static const std::string text = kGoldRulesUnfiltered;
    return text;
}

const std::vector<CommandSchema>& default_schemas() {
    static const std::vector<CommandSchema> schemas = [] {
        std::vector<std::string> texts;
        for (const auto& nt : schema_texts()) texts.push_back(nt.text);
        return load_schemas(texts);
    }();
    return schemas;
}

const std::vector<Abstraction>& default_abstractions() {
    static const std::vector<Abstraction> abstractions =
        parse_abstractions(abstractions_text());
    return abstractions;
}

}  // namespace dockrule::builtin
