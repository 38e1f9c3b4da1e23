#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# rvqite-lab documentation build configuration file.

import sys
import os

# Insert the project lib dir as the first element in the PYTHONPATH so
# that the source package is imported and its version is used.
cwd = os.getcwd()
project_root = os.path.dirname(cwd)
sys.path.insert(0, os.path.join(project_root, "lib"))

import rvqite

# -- General configuration ---------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'rvqite-lab'
copyright = u'2026, The rvqite-lab developers'

version = rvqite.__version__
release = rvqite.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'
autodoc_member_order = 'bysource'

# -- Options for HTML output -------------------------------------------

html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'rvqitelabdoc'

# -- Options for LaTeX output ------------------------------------------

latex_documents = [
    ('index', 'rvqite-lab.tex',
     u'rvqite-lab Documentation',
     u'The rvqite-lab developers', 'manual'),
]

# -- Options for manual page output ------------------------------------

man_pages = [
    ('index', 'rvqite-lab',
     u'rvqite-lab Documentation',
     [u'The rvqite-lab developers'], 1)
]
