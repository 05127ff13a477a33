# setup.py

from setuptools import setup, find_packages

setup(
    name='measured_walls',
    version='0.1.0',
    packages=find_packages(where='src'),
    py_modules=[
        'cli_report',
        'cnk_kernel',
        'crofton_verifier',
        'data_validation',
        'report_export',
        'wall_measure',
    ],
    package_dir={'': 'src'},
    install_requires=[
        # keep using requirements.txt
        'numpy',
        'scipy',
        'python-dotenv',
        'jsonschema',
        'pydantic>=2',
        'pandas',
        'filelock',
        'tqdm',
    ],
    extras_require={
        'test': ['pytest', 'pytest-mock', 'mpmath'],
    },
    include_package_data=True,
    description='Measured walls of hyperbolic space: Crofton constant and conditionally negative kernel checks.',
    author='JVB',
    author_email='',
    url='',
    entry_points={
        'console_scripts': [
            'measured-walls=cli_report:main',
        ],
    },
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.10',
)
