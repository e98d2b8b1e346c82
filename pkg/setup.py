import setuptools


authors = [
        'copula-bounds developers',
]


if __name__ == '__main__':
    setuptools.setup(
        name='copula-bounds',
        version='0.1.0',
        description='Improved Frechet-Hoeffding bounds and model-free option '
                    'price bounds under dependence uncertainty',
        author=', '.join(authors),
        license='Apache-2',
        packages=['cbounds', 'cbounds.dependence', 'cbounds.bounds',
                  'cbounds.payoffs', 'cbounds.cli'],
        install_requires=['torch', 'numpy', 'scipy'],
        entry_points={
            'console_scripts': ['cbounds=cbounds.cli:main'],
        })
